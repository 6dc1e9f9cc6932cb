"""
One-row-per-alpha tables behind the light-speed curves and ordering plots.

Rows may be computed by several joblib workers; Parallel returns results
in submission order, so the table is always sorted by alpha ascending.
"""

import json
import logging
from dataclasses import replace

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from kinematics.events import DegenerateConventionError, Event4, SyncParam
from kinematics.transforms import (
    classify_separation,
    coordinate_order,
    epsilon_to_a,
    one_way_velocity,
    resynchronize,
    round_trip_time_signed,
    winnie_epsilon,
)
from quantum.amplitudes import Order, amplitude_ordered
from quantum.measurement import marginal_distribution, total_variation

logger = logging.getLogger(__name__)

# A sits at x = -1, B at x = +1
A_POSITION = -1.0
B_POSITION = 1.0

# (0, 0) and (2, 1): s^2 = 3, coordinate order flips for a < -2
INTERVAL_EVENTS = ((0.0, 0.0), (2.0, 1.0))


def lightspeed_row(alpha, context):
    try:
        forward = one_way_velocity(1.0, alpha)
        backward = one_way_velocity(-1.0, alpha)
    except DegenerateConventionError:
        return {'alpha': alpha, 'forward': np.nan, 'backward': np.nan,
                'round_trip_time': np.nan, 'degenerate': True}
    return {
        'alpha': alpha,
        'forward': forward,
        'backward': backward,
        'round_trip_time': round_trip_time_signed(1.0, forward, backward),
        'degenerate': False,
    }


def transform_row(alpha, context):
    einstein = SyncParam.einstein()
    sync = SyncParam.along_x(alpha)
    east = resynchronize(Event4(1.0, 1.0), einstein, sync)
    west = resynchronize(Event4(1.0, -1.0), einstein, sync)
    back = resynchronize(east, sync, einstein)
    return {
        'alpha': alpha,
        't_east': east.t,
        't_west': west.t,
        'round_trip_gap': abs(back.t - 1.0),
    }


def epsilon_row(alpha, context):
    epsilon = winnie_epsilon(alpha)
    return {
        'alpha': alpha,
        'epsilon': epsilon,
        'alpha_back': epsilon_to_a(epsilon),
        'in_unit_interval': bool(0.0 < epsilon < 1.0),
    }


def interval_row(alpha, context):
    sync = SyncParam.along_x(alpha)
    einstein = SyncParam.einstein()
    first, second = (
        resynchronize(Event4(t, x), einstein, sync) for t, x in INTERVAL_EVENTS
    )
    causal = classify_separation(first, second, sync)
    return {
        'alpha': alpha,
        't_first': first.t,
        't_second': second.t,
        'interval_squared': causal.interval_squared,
        'kind': str(causal.kind),
        'order': str(coordinate_order(first, second, sync)),
    }


def relabelled_times(scenario, alpha):
    return scenario.t_a + alpha * A_POSITION, scenario.t_b + alpha * B_POSITION


def amplitude_row(alpha, context):
    s = context['scenario']
    t_a, t_b = relabelled_times(s, alpha)
    order = Order.A_FIRST if t_a <= t_b else Order.B_FIRST
    value = amplitude_ordered(s, order).value
    return {
        'alpha': alpha,
        't_a': t_a,
        't_b': t_b,
        'order': str(order),
        'amplitude_re': value.real,
        'amplitude_im': value.imag,
        'gap': abs(value - context['reference']),
    }


def nosignal_row(alpha, context):
    s = context['scenario']
    t_a, t_b = relabelled_times(s, alpha)
    moved = replace(
        s,
        t_a=t_a,
        t_b=t_b,
        t_in=min(s.t_in, t_a, t_b),
        t_out=max(s.t_out, t_a, t_b),
    )
    tv = total_variation(
        marginal_distribution(moved, context['remote'], context['local']),
        marginal_distribution(moved, None, context['local']),
    )
    return {
        'alpha': alpha,
        't_a': t_a,
        't_b': t_b,
        'order': str(Order.A_FIRST if t_a <= t_b else Order.B_FIRST),
        'tv_distance': tv,
    }


SWEEP_ROWS = {
    'lightspeed': lightspeed_row,
    'transform': transform_row,
    'epsilon': epsilon_row,
    'interval': interval_row,
    'amplitude': amplitude_row,
    'nosignal': nosignal_row,
}

# column checked against a tolerance, per op
CHECKED_COLUMNS = {
    'amplitude': ('gap', 'amplitude'),
    'nosignal': ('tv_distance', 'nosignal'),
}


def quantum_context(scenario, remote, local):
    return {
        'scenario': scenario,
        'remote': remote,
        'local': local,
        'reference': amplitude_ordered(scenario, Order.A_FIRST).value,
    }


def run_sweep(op, alpha_min, alpha_max, steps, context=None, n_jobs=1):
    alphas = np.linspace(alpha_min, alpha_max, steps)
    row = SWEEP_ROWS[op]
    logger.info(f"sweep {op}: {steps} steps over [{alpha_min!r}, {alpha_max!r}] with {n_jobs} job(s)")
    rows = Parallel(n_jobs=n_jobs, prefer='threads')(delayed(row)(float(alpha), context or {}) for alpha in alphas)
    return pd.DataFrame(rows)


def sweep_to_csv(frame):
    return frame.to_csv(index=False, lineterminator='\n')


def read_sweep_csv(path_or_buffer):
    return pd.read_csv(path_or_buffer, float_precision='round_trip')


def sweep_to_json(frame):
    """Rows as strict JSON: degenerate NaN cells become null."""
    rows = frame.astype(object).where(frame.notna(), None).to_dict(orient='records')
    return json.dumps(rows, indent=2, allow_nan=False) + '\n'
