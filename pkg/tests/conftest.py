import pytest

from hlf_aoi.latency import GammaParams

# Fitted consensus-latency parameters per target STP, (shape, rate).
TABLE_FITS = {
    0.3: (5.64, 3.01),
    0.4: (5.94, 2.45),
    0.5: (5.39, 2.85),
    0.6: (5.42, 2.84),
    0.7: (7.18, 3.73),
    0.8: (7.71, 4.12),
    0.9: (7.50, 4.35),
    1.0: (6.57, 3.82),
}


@pytest.fixture(scope="session")
def table_fits() -> dict[float, GammaParams]:
    return {z: GammaParams(*ab) for z, ab in TABLE_FITS.items()}
