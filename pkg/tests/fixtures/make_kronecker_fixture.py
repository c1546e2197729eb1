"""Regenerate kronecker2.json without using the qscatter package.

Two square-zero variables u1, u2 attached to z^(1,1) and z^(-1,1).  The new
wall-crossing factor X is fixed by exp(H1) exp(H2) = exp(H2) exp(X) exp(H1),
solved with the Baker-Campbell-Hausdorff series to third order.  Coefficients
are kept as  poly(s) / (s - 1/s)^e  with poly a dict {exponent: Fraction}.

Run:  python tests/fixtures/make_kronecker_fixture.py
"""

import json
from fractions import Fraction
from pathlib import Path

M1, M2 = (1, 1), (-1, 1)
SMS = {1: Fraction(1), -1: Fraction(-1)}  # s - 1/s


def pmul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def padd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def cadd(a, b):
    # coefficients (e, poly) meaning poly / (s - 1/s)^e
    (ea, pa), (eb, pb) = a, b
    e = max(ea, eb)
    for _ in range(e - ea):
        pa = pmul(pa, SMS)
    for _ in range(e - eb):
        pb = pmul(pb, SMS)
    return (e, padd(pa, pb))


def cmul(a, b):
    return (a[0] + b[0], pmul(a[1], b[1]))


def cscale(a, q):
    return (a[0], {k: v * q for k, v in a[1].items()})


def emul(x, y):
    # element: {(mask, zx, zy): coeff}; z^a z^b = s^<a,b> z^(a+b); u^2 = 0
    out = {}
    for (m1, ax, ay), c in x.items():
        for (m2, bx, by), d in y.items():
            if m1 & m2:
                continue
            k = ax * by - ay * bx
            key = (m1 | m2, ax + bx, ay + by)
            term = cmul(cmul(c, d), (0, {k: Fraction(1)}))
            out[key] = cadd(out[key], term) if key in out else term
    return {k: v for k, v in out.items() if v[1]}


def eadd(x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = cadd(out[k], v) if k in out else v
    return {k: v for k, v in out.items() if v[1]}


def escale(x, q):
    return {k: cscale(v, q) for k, v in x.items()}


def br(x, y):
    return eadd(emul(x, y), escale(emul(y, x), -1))


def bch(a, b):
    ab = br(a, b)
    out = eadd(eadd(a, b), escale(ab, Fraction(1, 2)))
    out = eadd(out, escale(br(a, ab), Fraction(1, 12)))
    out = eadd(out, escale(br(b, br(b, a)), Fraction(1, 12)))
    return out


def pdivexact(a, b):
    # exact division of Laurent polynomials
    a = dict(a)
    q = {}
    bt = max(b)
    while a:
        at = max(a)
        c = a[at] / b[bt]
        q[at - bt] = c
        a = padd(a, {k + at - bt: -c * v for k, v in b.items()})
        if a and max(a) < min(b) + (at - bt) - 64:
            raise ValueError("not exact")
    return q


def main():
    one = (1, {0: Fraction(1)})  # 1/(s - 1/s)
    H1 = {(1, *M1): one}
    H2 = {(2, *M2): one}
    neg = lambda x: escale(x, -1)
    # X = log(exp(-H2) exp(H1) exp(H2) exp(-H1))
    X = bch(bch(bch(neg(H2), H1), H2), neg(H1))
    X = {k: v for k, v in X.items() if k[0] == 3}
    assert list(X) == [(3, 0, 2)], X
    e, poly = X[(3, 0, 2)]
    # reduce one power of (s - 1/s)
    poly = pdivexact(poly, SMS)
    e -= 1
    assert e == 1
    # l_p = 2 so omega_bar = (-1)^(2+1) (s - 1/s) c = -poly
    omega = {k: -v for k, v in poly.items()}
    data = {
        "m": [list(M1), list(M2)],
        "p": [1, 1],
        "direction": [0, 1],
        "coefficient": {
            "num": [[k, f"{v.numerator}/{v.denominator}"] for k, v in sorted(poly.items())],
            "den": [[-1, "-1/1"], [1, "1/1"]],
        },
        "omega": [[k, f"{v.numerator}/{v.denominator}"] for k, v in sorted(omega.items())],
    }
    path = Path(__file__).with_name("kronecker2.json")
    path.write_text(json.dumps(data, indent=2) + "\n")
    print(json.dumps(data))


if __name__ == "__main__":
    main()
