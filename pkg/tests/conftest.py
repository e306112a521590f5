from __future__ import annotations

from datetime import datetime

import pytest

from bevsim.energy import builtin_vehicles
from bevsim.ingest import ParkingEvent, TripRecord


def trip(
    user: str, start: str, end: str, u: float = 0.0, e: float = 0.0, h: float = 0.0
) -> TripRecord:
    return TripRecord(user, datetime.fromisoformat(start), datetime.fromisoformat(end), u, e, h)


def parking(user: str, start: str, end: str) -> ParkingEvent:
    return ParkingEvent(user, datetime.fromisoformat(start), datetime.fromisoformat(end))


@pytest.fixture(scope="session")
def vehicles():
    return {v.name: v for v in builtin_vehicles()}


@pytest.fixture(scope="session")
def fiat(vehicles):
    return vehicles["Fiat 500e"]


@pytest.fixture(scope="session")
def tesla(vehicles):
    return vehicles["Tesla Model 3"]
