#!/usr/bin/env python3
"""Arbitrary-precision reference values for the default finger geometry.

Evaluates the slider-crank / isosceles-finger chain with mpmath at 50 digits,
independently of the Rust implementation. The printed values are frozen into
tests/common/oracle_values.rs:

    python3 tests/oracle/fk_oracle.py > tests/common/oracle_values.rs

Rerun this script after changing data/geometry.json.
"""
import json
import pathlib

from mpmath import mp, mpf, cos, sin, sqrt, asin, acos, diff

mp.dps = 50

here = pathlib.Path(__file__).resolve().parent
g = json.loads((here / ".." / ".." / "data" / "geometry.json").read_text())
r1, r2, e, c, d, l, dx, dy = (mpf(str(g[k])) for k in
                              ("r1", "r2", "e", "c", "d", "l", "delta_x", "delta_y"))


def slider(t):
    return r1 * cos(t) + sqrt(r2 ** 2 - r1 ** 2 * sin(t) ** 2)


def delta(t):
    return e - c - slider(t)


def base(t):
    return sqrt(d ** 2 + delta(t) ** 2)


def alpha(t):
    return asin(delta(t) / base(t)) + acos(base(t) / (2 * l))


def x_left(t):
    return l * cos(alpha(t)) - dx


def y_tip(t):
    return l * sin(alpha(t)) + dy


def aperture(t):
    return -2 * x_left(t)


def bisect(target, lo, hi):
    # aperture increases with theta on the operating window
    for _ in range(400):
        mid = (lo + hi) / 2
        if aperture(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


print("//! Frozen reference values for data/geometry.json, produced by tests/oracle/fk_oracle.py.")
print("#![allow(dead_code, clippy::excessive_precision)]")
print()


def show(name, v):
    print(f"pub const {name}: f64 = {mp.nstr(v, 20)};")


show("SLIDER_AT_M0_8", slider(mpf("-0.8")))
show("DELTA_AT_M0_8", delta(mpf("-0.8")))
show("BASE_AT_M1_4", base(mpf("-1.4")))
show("ALPHA_AT_M1_0", alpha(mpf("-1.0")))
show("X_LEFT_AT_M0_8", x_left(mpf("-0.8")))
show("Y_TIP_AT_M0_8", y_tip(mpf("-0.8")))
show("Y_TIP_AT_M1_4", y_tip(mpf("-1.4")))
show("Y_TIP_AT_M1_9", y_tip(mpf("-1.9")))
show("APERTURE_OPEN", aperture(mpf("-0.8")))
show("APERTURE_CLOSED", aperture(mpf("-1.4")))
show("APERTURE_AT_M1_9", aperture(mpf("-1.9")))
show("DX_LEFT_DTHETA_AT_M1_1", diff(x_left, mpf("-1.1")))
show("DY_TIP_DTHETA_AT_M1_1", diff(y_tip, mpf("-1.1")))
show("THETA_FOR_APERTURE_75", bisect(mpf(75), mpf("-1.4"), mpf("-0.8")))
