"""Smoke tests for the python module: a few end-to-end calls per subsystem."""

import math
import sys

import numpy as np

import modulilab as ml


def check(cond, label):
    if not cond:
        print(f"FAIL {label}")
        sys.exit(1)
    print(f"ok   {label}")


def main():
    # Alcove reduction round trip.
    alpha = np.array([0.4, 0.0, -0.4])
    a = np.diag(np.exp(-2j * math.pi * alpha))
    proj, conj = ml.project_to_alcove(a)
    check(np.allclose(proj, alpha, atol=1e-10), "alcove projection recovers the weights")

    u = ml.random_su(7, 3)
    check(np.allclose(u.conj().T @ u, np.eye(3), atol=1e-10), "Haar sample is unitary")
    proj2, _ = ml.project_to_alcove(u @ a @ u.conj().T)
    check(np.allclose(proj2, alpha, atol=1e-9), "projection is conjugation invariant")

    check(len(ml.enumerate_faces(3)) == 8, "8 faces for n = 3")
    check(np.allclose(ml.reversal(np.array([0.4, 0.1, -0.5])), [0.5, -0.1, -0.4]),
          "reversal is negate-and-reverse")

    # Model holonomy along the vanishing cycle is exp(-2 pi i alpha).
    hol = ml.holonomy(alpha, t=0.25, path="gamma", gauge="unitary")
    check(np.allclose(np.diag(hol), np.exp(-2j * math.pi * alpha), atol=1e-8),
          "gamma holonomy is A")
    res1 = ml.residue(alpha, "blowup1")
    res2 = ml.residue(alpha, "blowup2")
    check(np.allclose(np.diag(res1), -alpha / 2, atol=1e-8) and
          np.allclose(np.diag(res2), alpha / 2, atol=1e-8),
          "blow-up residues are -alpha/2 and +alpha/2")

    # Presentation solve and the parameter count.
    alpha2 = np.array([0.3, -0.3])
    p = ml.solve_relation(5, 2, 2, alpha2, 0.2)
    check(ml.relation_residual(p) <= 1e-10, "solver reaches the relation manifold")
    check(ml.tangent_dimension(p) == 6, "tangent dimension (2g-2)(n^2-1) = 6")
    m1, m2 = ml.moment_map(p)
    check(np.allclose(m2, ml.reversal(np.asarray(m1))), "moment map is (alpha, -R(alpha))")

    # Trinion counts against the closed form.
    for k, expected in ((1, 4), (2, 10)):
        out = ml.verlinde_crosscheck(2, k)
        check(out["count"] == expected and out["agree"], f"verlinde g=2 k={k} is {expected}")
    bk = ml.quotient_dimension_bookkeeping(2, 2)
    check(bk["torus_dim"] == 3 and bk["target_dim"] == 6 and bk["ledger_sum"] == 0,
          "quotient dimension ledger balances")

    # Framing pairings exist on the open stratum.
    pairings = ml.beta_pairings(11, [1, 2, 3], 0)
    check(len(pairings) == 3 and all(v is not None for v in pairings),
          "antidiagonal pairings on the full flag stratum")

    print("smoke test passed")


if __name__ == "__main__":
    main()
