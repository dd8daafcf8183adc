#!/usr/bin/env python3
"""Smoke test for the liegauss_py extension module.

Builds nothing itself: expects `cargo build -p liegauss-py` (debug or release)
to have produced libliegauss_py.so, which is staged under a temp directory
with the importable name and exercised end to end.
"""

import math
import pathlib
import shutil
import sys
import tempfile


def stage_module() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libliegauss_py.so", "liegauss_py.so", "libliegauss_py.dylib")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("liegauss_py not built; run: cargo build -p liegauss-py")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="liegauss_py_"))
    suffix = ".so" if built.suffix != ".dylib" else ".so"
    shutil.copy2(built, stage / ("liegauss_py" + suffix))
    return stage


sys.path.insert(0, str(stage_module()))

import liegauss_py as lg  # noqa: E402

checks = 0


def check(cond, what):
    global checks
    assert cond, what
    checks += 1


# Root systems and Coxeter data.
e8 = lg.root_system("E8")
check(e8.coxeter == 30 and e8.dual_coxeter == 30, "E8 Coxeter numbers")
check(e8.num_roots == 240, "E8 root count")
f4 = lg.root_system("F4")
check((f4.coxeter, f4.dual_coxeter, f4.length_ratio) == (12, 9, 2), "F4 data")
check(lg.root_system("B3").dual_type() == "C3", "B3 dual is C3")
check(f4.coxeter_identity(), "F4 Coxeter identity")
check(lg.root_system("A3").cartan()[0] == [2, -1, 0], "A3 Cartan row")

# Centers and forms.
check(lg.center_invariants("D4") == [2, 2], "D4 center Z2xZ2")
check(lg.center_invariants("A5") == [6], "A5 center Z6")
check(sorted(lg.all_forms("A5")) == ["SU(6)", "SU(6)/Z2", "SU(6)/Z3", "SU(6)/Z6"], "A5 forms")
su6 = lg.group_form("SU(6)/Z2")
check(su6.center_order == 3 and su6.pi1_order == 2, "SU(6)/Z2 orders")
check(su6.dual_name() == "SU(6)/Z3", "SU(6)/Z2 dual")
check(lg.group_form("Sp(3)").dual_name() == "SO(7)", "Sp(3) dual")
check(lg.group_form("E7").miniscule_norms() == ["0", "3/2"], "E7 miniscule norms")

# Gauss sums and reciprocity.
disp, (re, im) = lg.gauss_sum("E8")
check(abs(re - 1) < 1e-12 and abs(im) < 1e-12, "Gauss sum of E8 is 1")
_, (re, im) = lg.gauss_sum("SU(2)")
check(abs(re - math.cos(math.pi / 4)) < 1e-12 and abs(im - math.sin(math.pi / 4)) < 1e-12,
      "Gauss sum of SU(2) is e^{iπ/4}")
for name in ("SU(6)/Z2", "E7", "Spin(10)"):
    check(lg.verify_reciprocity(name), f"reciprocity {name}")
for t in ("A4", "D6", "E6"):
    check(lg.verify_gauss_identity(t), f"Gauss identity {t}")
try:
    lg.verify_gauss_identity("B3")
    sys.exit("B3 should be rejected")
except ValueError:
    checks += 1

# Modular and Hecke relations.
check(all(lg.verify_modular_relations("A2").values()), "A2 modular relations")
check(all(lg.verify_hecke_relations("G2").values()), "G2 Hecke relations")
check(all(lg.verify_hecke_relations("B4").values()), "B4 Hecke relations")
check(lg.verify_s_duality("SU(4)/Z2"), "SU(4)/Z2 vector self-duality")
check(lg.verify_s_duality("Spin(7)"), "Spin(7) two-sector exchange")

# Number theory specialisations.
check(lg.legendre(3, 5) == -1, "(3/5) = -1")
check(lg.verify_quadratic_reciprocity(3, 7), "quadratic reciprocity (3,7)")

# Theta functions.
re, im = lg.theta_eval("SU(2)", (0.0, 1.0))
check(abs(im) < 1e-12 and re > 1.0, "theta of SU(2) at tau=i is real > 1")
check(lg.theta_laws_max_residual("A2", (0.3, 0.9)) < 1e-8, "A2 theta laws")
check(lg.theta_laws_max_residual("B2", (0.3, 0.9)) < 1e-7, "B2 theta laws")
re, im = lg.landsberg("E8", 0.1)
check(abs(complex(re, im) - 1) < 1e-6, "E8 Landsberg limit")

print(f"smoke test: {checks} checks passed")
