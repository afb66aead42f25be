"""Exact chemical master equation for 2M <-> D, #M=100, v=100.

Forward propensity K1 C(#M, 2) / v, reverse K2 #D, matching crnbatch's rate
format. Usage: dimer_cme.py [K1]; the default K1 = 2 is models/dimer.crn.

Prints E[#D] at t=0.5, near equilibrium (t=50), and after exactly 60 reactions
of the embedded jump chain.
"""
import sys

import numpy as np
from scipy.linalg import expm

M0, V, K2 = 100, 100.0, 1.0
K1 = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
states = list(range(M0 // 2 + 1))  # #D


def rates(d):
    m = M0 - 2 * d
    fwd = K1 * m * (m - 1) / 2.0 / V
    rev = K2 * d
    return fwd, rev


n = len(states)
Q = np.zeros((n, n))
for d in states:
    f, r = rates(d)
    if d + 1 < n:
        Q[d, d + 1] = f
    if d > 0:
        Q[d, d - 1] = r
    Q[d, d] = -(Q[d].sum())

p0 = np.zeros(n)
p0[0] = 1.0
pt = p0 @ expm(Q * 0.5)
print("E[D](t=0.5) =", float(pt @ np.arange(n)))
print("E[D](t=50) =", float((p0 @ expm(Q * 50.0)) @ np.arange(n)))

P = np.zeros((n, n))
for d in states:
    f, r = rates(d)
    tot = f + r
    if tot == 0:
        P[d, d] = 1
        continue
    if d + 1 < n:
        P[d, d + 1] = f / tot
    if d > 0:
        P[d, d - 1] = r / tot
p = p0.copy()
for _ in range(60):
    p = p @ P
print("E[D](steps=60) =", float(p @ np.arange(n)))
