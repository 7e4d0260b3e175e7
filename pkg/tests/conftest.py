import mpmath as mp
import pytest

from contracted_maxima.contraction import ContractionSpec
from contracted_maxima.corr_models import CorrelationModel


@pytest.fixture(scope="session")
def mp50():
    with mp.workdps(50):
        yield mp


SPECS = {
    "one": ContractionSpec.degenerate(),
    "beta11": ContractionSpec.beta(1, 1),
    "beta23": ContractionSpec.beta(2, 3),
    "atom": ContractionSpec.atom_mixture(0.3, 0.5),
    "ptail": ContractionSpec.power_tail(0.5, 1),
    "ptail2": ContractionSpec.power_tail(0.5, 2),
}

MODELS = {
    "iid": CorrelationModel.iid(),
    "ar1": CorrelationModel.ar1(0.5),
    "pow": CorrelationModel.power_decay(0.9, 2),
    "log": CorrelationModel.log_decay(0.9, 1.5),
}
