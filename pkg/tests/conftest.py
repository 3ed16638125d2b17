import pytest

from src.models import AnalysisParams, Dominance, ModelParams


@pytest.fixture
def params() -> ModelParams:
    return ModelParams(f=4.0, D=1.0, delta=0.3, c=1.0, K=100)


@pytest.fixture
def analysis() -> AnalysisParams:
    return AnalysisParams()


@pytest.fixture
def codominant(params) -> ModelParams:
    return params.model_copy(update={"dominance": Dominance.CODOMINANT})


@pytest.fixture
def fast_params() -> ModelParams:
    """Strong selection, so that small Monte Carlo runs finish quickly."""
    return ModelParams(f=4.0, D=1.0, delta=1.0, c=1.0, K=100)


@pytest.fixture
def fast_analysis() -> AnalysisParams:
    return AnalysisParams(eps=0.2, theta=0.7, delta_fix=0.3, floor_scale=0.4)
