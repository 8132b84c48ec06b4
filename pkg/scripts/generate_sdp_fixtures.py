"""Freeze independent semidefinite-program values of the two-parameter Holevo bound.

Run once (needs cvxpy):

    python3 scripts/generate_sdp_fixtures.py

The Holevo bound with identity weight is

    min tr V   over real symmetric V and Hermitian X_1, X_2
    s.t. [[V, C^dag], [C, I]] >= 0,  C = [vec(X_1 sqrt(rho)), vec(X_2 sqrt(rho))],
         tr(rho X_j) = 0,  tr(drho_j X_k) = delta_jk,

because tr(rho X_j X_k) = (C^dag C)_jk and min {tr V : V >= Z} = tr Re Z + ||Im Z||_1.
Nothing from the package's solvers is used here.
"""

from __future__ import annotations

import json
from pathlib import Path

import cvxpy as cp
import numpy as np

SEED = 20240611
COUNT = 10
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "sdp_qubit_models.json"

PAULI = [np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]], dtype=complex),
         np.array([[1, 0], [0, -1]], dtype=complex)]


def random_qubit_model(rng):
    direction = rng.normal(size=3)
    r = rng.uniform(0.2, 0.9) * direction / np.linalg.norm(direction)
    rho = (np.eye(2) + sum(ri * p for ri, p in zip(r, PAULI))) / 2
    drho = [sum(ci * p for ci, p in zip(rng.normal(size=3), PAULI)) / 2 for _ in range(2)]
    return rho, drho


def holevo_sdp(rho, drho):
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    dim = rho.shape[0]
    xs = [cp.Variable((dim, dim), hermitian=True) for _ in range(2)]
    vmat = cp.Variable((2, 2), symmetric=True)
    cols = [cp.reshape(x @ sqrt_rho, (dim * dim, 1), order="F") for x in xs]
    c = cp.hstack(cols)
    block = cp.bmat([[vmat, c.H], [c, np.eye(dim * dim)]])
    cons = [block >> 0]
    for j, x in enumerate(xs):
        cons.append(cp.real(cp.trace(rho @ x)) == 0)
        for k, d in enumerate(drho):
            cons.append(cp.real(cp.trace(d @ x)) == (1.0 if j == k else 0.0))
    prob = cp.Problem(cp.Minimize(cp.trace(vmat)), cons)
    for solver in (cp.CLARABEL, cp.CVXOPT, cp.SCS):
        try:
            prob.solve(solver=solver)
        except cp.SolverError:
            continue
        if prob.status == cp.OPTIMAL:
            break
    return float(prob.value), f"{prob.status} ({solver})"


def encode(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def main():
    rng = np.random.default_rng(SEED)
    records = []
    for i in range(COUNT):
        rho, drho = random_qubit_model(rng)
        value, status = holevo_sdp(rho, drho)
        records.append({
            "index": i,
            "model": {"dim": 2, "nparams": 2, "rho": encode(rho), "drho": [encode(d) for d in drho]},
            "hcrb": value,
            "status": status,
        })
        print(f"model {i}: {value:.12g} {status}")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    doc = {"seed": SEED, "solver": f"cvxpy {cp.__version__}", "records": records}
    OUT.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
