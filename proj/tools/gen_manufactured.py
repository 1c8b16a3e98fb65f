#!/usr/bin/env python3
"""Generates src/ddr/manufactured_generated.inc from the closed-form
magnetostatics solution w = sin^2(pi x) sin^2(pi y) sin(pi z),
A = (d_y w, -d_x w, 0), H = curl A, J = curl H (mu = 1)."""

import pathlib
import sympy as sp

x, y, z = sp.symbols("x y z", real=True)
X = (x, y, z)


def curl(F):
    return [sp.diff(F[2], y) - sp.diff(F[1], z),
            sp.diff(F[0], z) - sp.diff(F[2], x),
            sp.diff(F[1], x) - sp.diff(F[0], y)]


w = sp.sin(sp.pi * x) ** 2 * sp.sin(sp.pi * y) ** 2 * sp.sin(sp.pi * z)
grad_w = [sp.diff(w, v) for v in X]
A = [sp.diff(w, y), -sp.diff(w, x), sp.Integer(0)]
H = curl(A)
J = curl(H)

assert sp.simplify(sum(sp.diff(A[i], X[i]) for i in range(3))) == 0


def emit_scalar(name, e):
    return f"inline double {name}(const Vec3& p) {{\n  {prelude}  return {sp.ccode(sp.simplify(e))};\n}}\n"


def emit_vector(name, F):
    comps = ", ".join(sp.ccode(sp.simplify(c)) for c in F)
    return f"inline Vec3 {name}(const Vec3& p) {{\n  {prelude}  return Vec3({comps});\n}}\n"


prelude = "const double x = p(0), y = p(1), z = p(2);\n  (void)x; (void)y; (void)z;\n"

out = ["// Generated by tools/gen_manufactured.py; do not edit.\n",
       emit_scalar("generated_w", w),
       emit_vector("generated_grad_w", grad_w),
       emit_vector("generated_A", A),
       emit_vector("generated_H", H),
       emit_vector("generated_J", J)]
target = pathlib.Path(__file__).resolve().parent.parent / "src" / "ddr" / "manufactured_generated.inc"
target.write_text("\n".join(out))
print(f"wrote {target}")
