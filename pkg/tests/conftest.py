from __future__ import annotations

import numpy as np

from skillsim.engine import MetricFrame
from skillsim.model import DIFFICULTIES, INTERACTIONS, POLICIES


def make_frame(config_id, rows):
    """Hand-build a frame from (k, e, i, policy, interaction, difficulty,
    theta, y, v, err, u) tuples."""
    cols = list(zip(*rows))
    return MetricFrame(
        config_id,
        k=np.array(cols[0], dtype=np.int32),
        e=np.array(cols[1], dtype=np.int32),
        i=np.array(cols[2], dtype=np.int32),
        c=np.array([POLICIES.index(c) for c in cols[3]], dtype=np.int8),
        a=np.array([INTERACTIONS.index(a) for a in cols[4]], dtype=np.int8),
        d=np.array([DIFFICULTIES.index(d) for d in cols[5]], dtype=np.int8),
        theta=np.array(cols[6], dtype=np.float64),
        y=np.array(cols[7], dtype=np.float64),
        v=np.array(cols[8], dtype=np.float64),
        err=np.array(cols[9], dtype=np.float64),
        u=np.array(cols[10], dtype=np.float64),
    )
