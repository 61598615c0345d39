import pytest

from riskgate import (
    OccupationalExposure,
    PersonProfile,
    RawScenario,
    default_matrix,
)


@pytest.fixture(scope="session")
def matrix():
    return default_matrix()


@pytest.fixture
def profile_vi():
    # 55 years old, nothing remarkable
    return PersonProfile(age=55)


@pytest.fixture
def profile_nurse():
    # direct contact to vulnerable persons
    return PersonProfile(age=55, occupational_exposure=OccupationalExposure.VERY_HIGH)


@pytest.fixture
def shopping():
    # many people, moderate incidence, three short visits a week
    return RawScenario(
        persons=30,
        weekly_incidence=80,
        exposures_per_week=3,
        duration_minutes=4,
        label="click&meet shopping",
    )


@pytest.fixture
def shopping_doc():
    return {
        "persons": 30,
        "weekly_incidence": 80,
        "exposures_per_week": 3,
        "duration_minutes": 4,
        "label": "click&meet shopping",
    }
