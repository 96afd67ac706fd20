#!/usr/bin/env python3
"""Golden-value generator for the curvature engine.

Works from closed-form metric functions A(x), B(x) and differentiates them
symbolically with sympy, so it shares no code path with the Rust engine,
which only ever sees 2-jets. Output is exact ("p/q" strings).

Usage: python3 tools/oracle/gen_goldens.py [core_dir] [cli_dir]

The cli goldens hold the curvature blocks `circgeo analyze` should print for
the instance fixtures in crates/cli/tests/fixtures.
"""

import json
import sys
from pathlib import Path

import sympy as sp

X = sp.symbols("x1:4")
ORIGIN = {x: 0 for x in X}


def q(v):
    v = sp.nsimplify(sp.simplify(v), rational=True)
    assert v.is_Rational, v
    return str(v)


def circ(a, b):
    return sp.Matrix(3, 3, lambda i, j: a if i == j else b)


def curvature(G, G_dual):
    """Christoffel symbols, R_ijkl = g(R(e_i,e_j)e_k, e_l), Ricci, tau, tau* at the origin."""
    Gi = G.inv()
    gam = [[[sp.simplify(sum(Gi[k, l] * (sp.diff(G[j, l], X[i]) + sp.diff(G[i, l], X[j])
                                         - sp.diff(G[i, j], X[l])) for l in range(3)) / 2)
             for j in range(3)] for i in range(3)] for k in range(3)]
    mixed = {}
    for m in range(3):
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    mixed[m, i, j, k] = (sp.diff(gam[m][j][k], X[i]) - sp.diff(gam[m][i][k], X[j])
                                         + sum(gam[m][i][l] * gam[l][j][k] - gam[m][j][l] * gam[l][i][k]
                                               for l in range(3))).subs(ORIGIN)
    G0 = G.subs(ORIGIN)
    Gi0 = G0.inv()
    riem = {}
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    riem[i, j, k, l] = sp.nsimplify(sum(mixed[m, i, j, k] * G0[m, l] for m in range(3)))
    ricci = sp.Matrix(3, 3, lambda y, z: sum(Gi0[i, j] * riem[i, y, z, j] for i in range(3) for j in range(3)))
    tau = sum(Gi0[i, j] * ricci[i, j] for i in range(3) for j in range(3))
    dual_inv = G_dual.subs(ORIGIN).inv()
    tau_star = sum(dual_inv[i, j] * ricci[i, j] for i in range(3) for j in range(3))
    gam0 = [[[q(gam[k][i][j].subs(ORIGIN)) for j in range(3)] for i in range(3)] for k in range(3)]
    return {
        "christoffel": gam0,
        "riemann": [q(riem[i, j, k, l]) for i in range(3) for j in range(3) for k in range(3) for l in range(3)],
        "ricci": [[q(ricci[i, j]) for j in range(3)] for i in range(3)],
        "tau": q(tau),
        "tau_star": q(tau_star),
    }


def jet_of(A, B):
    d = lambda f: [q(sp.diff(f, x).subs(ORIGIN)) for x in X]
    h = lambda f: [[q(sp.diff(f, x, y).subs(ORIGIN)) for y in X] for x in X]
    return {
        "a": q(A.subs(ORIGIN)), "b": q(B.subs(ORIGIN)),
        "da": d(A), "db": d(B), "d2a": h(A), "d2b": h(B),
    }


def circulant_case(name, A, B, description):
    G = circ(A, B)
    Gt = circ(2 * B, A + B)
    return name, {
        "description": description,
        "a_closed_form": str(A),
        "b_closed_form": str(B),
        "jet": jet_of(A, B),
        "base": curvature(G, Gt),
        "associated": curvature(Gt, G),
    }


def lie_nabla_q(brackets, metric):
    """(nabla_i Q)^k_j for the left-invariant connection of `metric`."""
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in brackets.items():
        for k in range(3):
            c[i][j][k] = sp.nsimplify(v[k])
            c[j][i][k] = -sp.nsimplify(v[k])
    Mi = metric.inv()
    E = sp.eye(3)

    def m(u, v):
        return (sp.Matrix(u).T * metric * sp.Matrix(v))[0]

    N = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rhs = sp.Matrix([(m(c[i][j], E[:, k]) + m(c[k][i], E[:, j]) + m(c[k][j], E[:, i])) / 2
                             for k in range(3)])
            N[i][j] = list(Mi * rhs)

    def qimg(j):
        return (j + 1) % 3

    out = [[[None] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            # nabla_i (Q x_j) - Q nabla_i x_j
            first = N[i][qimg(j)]
            second = [0, 0, 0]
            for mm in range(3):
                second[qimg(mm)] += N[i][j][mm]
            for k in range(3):
                out[i][k][j] = q(first[k] - second[k])
    return out


def structure_constants(brackets):
    c = [[[sp.Integer(0)] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in brackets.items():
        for k in range(3):
            c[i][j][k] = sp.nsimplify(v[k])
            c[j][i][k] = -sp.nsimplify(v[k])
    return c


def lie_curvature(brackets, metric, dual):
    """Curvature of a left-invariant metric, straight from the brackets."""
    c = structure_constants(brackets)
    Mi = metric.inv()
    E = sp.eye(3)

    def m(u, v):
        return (sp.Matrix(u).T * metric * sp.Matrix(v))[0]

    # nabla_{e_i} e_j as a coefficient vector
    N = [[list(Mi * sp.Matrix([(m(c[i][j], E[:, k]) + m(c[k][i], E[:, j]) + m(c[k][j], E[:, i])) / 2
                               for k in range(3)])) for j in range(3)] for i in range(3)]

    def nabla(i, v):
        return [sum(v[j] * N[i][j][k] for j in range(3)) for k in range(3)]

    def nabla_vec(u, v):
        return [sum(u[i] * nabla(i, v)[k] for i in range(3)) for k in range(3)]

    riem = {}
    for i in range(3):
        for j in range(3):
            for k in range(3):
                ek = list(E[:, k])
                a = nabla(i, nabla(j, ek))
                b = nabla(j, nabla(i, ek))
                cc = nabla_vec(c[i][j], ek)
                r = [a[t] - b[t] - cc[t] for t in range(3)]
                for l in range(3):
                    riem[i, j, k, l] = sp.nsimplify(m(r, E[:, l]))
    return summarize(riem, metric, dual)


def summarize(riem, G0, dual):
    Gi0 = G0.inv()
    ricci = sp.Matrix(3, 3, lambda y, z: sum(Gi0[i, j] * riem[i, y, z, j] for i in range(3) for j in range(3)))
    tau = sum(Gi0[i, j] * ricci[i, j] for i in range(3) for j in range(3))
    di = dual.inv()
    tau_star = sum(di[i, j] * ricci[i, j] for i in range(3) for j in range(3))
    labels = ["1212", "1213", "1223", "1313", "1323", "2323"]
    return {
        "riemann": {lab: q(riem[tuple(int(ch) - 1 for ch in lab)]) for lab in labels},
        "ricci": [[q(ricci[i, j]) for j in range(3)] for i in range(3)],
        "tau": q(tau),
        "tau_star": q(tau_star),
    }


def family_brackets(family, lam):
    lam = [sp.nsimplify(x) for x in lam]
    if family == 1:
        l1, l2, l3 = lam
        return {(0, 1): [l1, l2, 0], (0, 2): [l3, 0, l2], (1, 2): [0, l3, -l1]}
    l1, l2 = lam
    v = [l1, l2, -(l1 + l2)]
    return {(0, 1): v, (0, 2): [-x for x in v], (1, 2): v}


def cli_circulant(fixture):
    p = {"da": [0] * 3, "db": [0] * 3, "d2a": [[0] * 3] * 3, "d2b": [[0] * 3] * 3, **fixture["payload"]}
    n = lambda v: sp.Rational(str(v))
    A = n(p["a"]) + sum(n(p["da"][i]) * X[i] for i in range(3)) \
        + sum(n(p["d2a"][i][j]) * X[i] * X[j] for i in range(3) for j in range(3)) / 2
    B = n(p["b"]) + sum(n(p["db"][i]) * X[i] for i in range(3)) \
        + sum(n(p["d2b"][i][j]) * X[i] * X[j] for i in range(3) for j in range(3)) / 2
    G, Gt = circ(A, B), circ(2 * B, A + B)
    out = {}
    for side, (M, D) in {"base": (G, Gt), "associated": (Gt, G)}.items():
        full = curvature(M, D)
        r = full["riemann"]
        riem = {(i, j, k, l): sp.Rational(r[27 * i + 9 * j + 3 * k + l])
                for i in range(3) for j in range(3) for k in range(3) for l in range(3)}
        out[side] = summarize(riem, M.subs(ORIGIN), D.subs(ORIGIN))
    return out


def cli_lie(fixture):
    p = fixture["payload"]
    if fixture["kind"] == "lie-family":
        brackets = family_brackets(p["family"], p["lambda"])
    else:
        brackets = {(int(k[0]) - 1, int(k[1]) - 1): [sp.nsimplify(str(x)) for x in v]
                    for k, v in p["brackets"].items()}
    g = sp.eye(3)
    gt = sp.ones(3, 3) - sp.eye(3)
    return {"base": lie_curvature(brackets, g, gt), "associated": lie_curvature(brackets, gt, g)}


CLI_FIXTURES = [
    "circulant_constant", "circulant_quadratic", "lie_family1", "lie_family2",
    "lie_family1_generic", "lie_family2_generic", "lie_custom_heisenberg",
]


def main_cli(fixtures, outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in CLI_FIXTURES:
        fixture = json.loads((Path(fixtures) / f"{name}.json").read_text())
        body = cli_circulant(fixture) if fixture["kind"] == "circulant-jet" else cli_lie(fixture)
        body["fixture"] = f"{name}.json"
        (outdir / f"{name}.json").write_text(json.dumps(body, indent=1, sort_keys=True) + "\n")


def main(outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cases = [
        circulant_case("christoffel_a_linear", 2 + X[0], sp.Integer(1),
                       "A = 2 + x1, B = 1 at the origin"),
        circulant_case("curvature_a_quadratic", 2 + X[0] + X[1] ** 2, sp.Integer(1),
                       "A = 2 + x1 + x2^2, B = 1 at the origin"),
        circulant_case(
            "curvature_generic",
            sp.Rational(7, 2) + X[0] / 3 - X[1] / 5 + 2 * X[2] + X[0] ** 2 / 2 - X[0] * X[2] / 3
            + X[1] * X[2] / 7 - X[2] ** 2 / 4,
            1 + X[0] / 2 + X[1] / 4 - X[2] / 6 - X[0] * X[1] / 5 + X[1] ** 2 / 3 + X[0] * X[2] / 8,
            "polynomial A, B with all first and second partials of B nonzero somewhere"),
    ]
    for name, payload in cases:
        (outdir / f"{name}.json").write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")

    l1, l2, l3 = 1, 0, 0
    family1 = {(0, 1): [l1, l2, 0], (1, 2): [0, l3, -l1], (0, 2): [l3, 0, l2]}
    gt = sp.ones(3, 3) - sp.eye(3)
    (outdir / "lie_family1_nabla_q.json").write_text(json.dumps({
        "description": "(nabla~_i Q)^k_j, indexed [i][k][j], family 1, lambda = (1, 0, 0), metric g~",
        "lambda": ["1", "0", "0"],
        "nabla_q": lie_nabla_q(family1, gt),
    }, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/golden")
    main_cli("crates/cli/tests/fixtures", sys.argv[2] if len(sys.argv) > 2 else "crates/cli/tests/golden")
