"""
Transition amplitudes through two measurements, in three equivalent forms.

ordered:     <out| U(t_out - t2) O_2 U(t2 - t1) O_1 U(t1 - t_in) |in>, U from the full H
factored:    the same with every factor split into an A part and a B part
heisenberg:  <out| O_2(t2) O_1(t1) |in>, O_X(t) = e^{-iH_X(t_out - t)} O_X e^{-iH_X(t - t_in)}

The first holds for any scenario. The other two only hold when H_int = 0,
and then all three agree for either insertion order.
"""

from dataclasses import dataclass

import numpy as np
from django.db import models

from .operators import embed_a, embed_b, evolve, time_evolution_operator


class Order(models.TextChoices):
    A_FIRST = 'A-first', 'O_A applied first'
    B_FIRST = 'B-first', 'O_B applied first'


@dataclass(frozen=True)
class Amplitude:
    value: complex

    def gap(self, other):
        return abs(self.value - other.value)


def amplitude_ordered(scenario, order):
    """
    Insert the operator named by `order` first, whatever the numeric times
    say; the evolution between the two insertions may run backwards.
    """
    s = scenario
    h = s.full_hamiltonian
    if Order(order) == Order.A_FIRST:
        (t1, o1), (t2, o2) = (s.t_a, s.o_a_full), (s.t_b, s.o_b_full)
    else:
        (t1, o1), (t2, o2) = (s.t_b, s.o_b_full), (s.t_a, s.o_a_full)

    state = evolve(s.psi_in, h, t1 - s.t_in)
    state = evolve(o1 @ state, h, t2 - t1)
    state = evolve(o2 @ state, h, s.t_out - t2)
    return Amplitude(complex(np.vdot(s.psi_out, state)))


def _local_history(op, hamiltonian, t, t_in, t_out):
    """e^{-iH(t_out - t)} O e^{-iH(t - t_in)} on one subsystem, as a list applied right to left."""
    return [
        time_evolution_operator(hamiltonian, t - t_in),
        op,
        time_evolution_operator(hamiltonian, t_out - t),
    ]


def amplitude_factored(scenario, order):
    """Product of six embedded single-subsystem factors; requires H_int = 0."""
    s = scenario
    s.require_non_interacting()
    a_factors = [embed_a(f, s.dim_b) for f in _local_history(s.o_a, s.h_a, s.t_a, s.t_in, s.t_out)]
    b_factors = [embed_b(f, s.dim_a) for f in _local_history(s.o_b, s.h_b, s.t_b, s.t_in, s.t_out)]
    factors = a_factors + b_factors if Order(order) == Order.A_FIRST else b_factors + a_factors

    state = s.psi_in
    for factor in factors:
        state = factor @ state
    return Amplitude(complex(np.vdot(s.psi_out, state)))


def heisenberg_operator(op, hamiltonian, t, t_in, t_out):
    """O(t) = e^{-iH(t_out - t)} O e^{-iH(t - t_in)}"""
    before, middle, after = _local_history(op, hamiltonian, t, t_in, t_out)
    return after @ middle @ before


def amplitude_heisenberg(scenario, order):
    s = scenario
    s.require_non_interacting()
    o_a_t = embed_a(heisenberg_operator(s.o_a, s.h_a, s.t_a, s.t_in, s.t_out), s.dim_b)
    o_b_t = embed_b(heisenberg_operator(s.o_b, s.h_b, s.t_b, s.t_in, s.t_out), s.dim_a)
    if Order(order) == Order.A_FIRST:
        product = o_b_t @ o_a_t
    else:
        product = o_a_t @ o_b_t
    return Amplitude(complex(np.vdot(s.psi_out, product @ s.psi_in)))


def order_gap(scenario):
    """|M(A first) - M(B first)| from the ordered form."""
    return amplitude_ordered(scenario, Order.A_FIRST).gap(amplitude_ordered(scenario, Order.B_FIRST))


def three_form_gap(scenario):
    """Worst disagreement among the ordered, factored and Heisenberg forms over both orders."""
    values = [
        form(scenario, order).value
        for form in (amplitude_ordered, amplitude_factored, amplitude_heisenberg)
        for order in Order
    ]
    return max(abs(x - y) for x in values for y in values)
