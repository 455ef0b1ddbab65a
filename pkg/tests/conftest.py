import math
import os

import numpy as np
import pytest

from debrisplan.drift import HIGH_THRUST, LOW_THRUST, TransferProblem
from debrisplan.ingest import parse_debris_csv
from debrisplan.orbital import EARTH

DAY = 86400.0

FIXTURE_CSV = os.path.join(os.path.dirname(__file__), os.pardir, "src",
                           "debrisplan", "data", "debris21.csv")


@pytest.fixture(scope="session")
def debris21():
    return parse_debris_csv(FIXTURE_CSV, default_op_cost=15.0)


def make_problem(d_from, d_to, t1, t2, mode=HIGH_THRUST, accel=0.0035,
                 raan_tol=0.0, op_dwell=5.0 * DAY):
    return TransferProblem(
        debris_from=d_from, debris_to=d_to, t1=t1, t2=t2, mode=mode,
        r_min=EARTH.r_eq + 400.0e3, r_max=EARTH.r_eq + 2000.0e3,
        op_dwell=op_dwell,
        accel=accel if mode == LOW_THRUST else 0.0,
        inc_window=math.radians(3.0), raan_tol=raan_tol)


@pytest.fixture
def problem_factory(debris21):
    def factory(j, k, t1_days, t2_days, **kwargs):
        return make_problem(debris21[j - 1], debris21[k - 1],
                            t1_days * DAY, t2_days * DAY, **kwargs)
    return factory
