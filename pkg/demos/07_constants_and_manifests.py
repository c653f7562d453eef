"""
Constants, failure classes, and reproducible runs
=================================================

Class shares for a variety with a constant, the two identity classes that
keep a zero-one law from holding, and a density run driven by a manifest.
"""

import json
import tempfile
from pathlib import Path

from limdens.cli import main
from limdens.density import constant_example_densities, constants_like_density

res = constant_example_densities(s_values=[0, 50, 200])
lim = res.pop("limits")
for name, series in res.items():
    print(f"{name:20s} s=0 {float(series.density(0)):.4f}  s=200 {float(series.density(200)):.4f}"
          f"  limit {lim[name]}")

a, b = constants_like_density(2, 1, s_values=[60, 600])
for s in (60, 600):
    print(f"s={s}: class A {float(a.density(s)):.5f} (-> 1/8), class B {float(b.density(s)):.5f} (-> 1/4)")

# the CLI writes a series, a report and the manifest that reproduces them
out = Path(tempfile.mkdtemp())
main(["density", "--family", "unary", "--sentence", "NotInjective", "--smax", "100", "--out", str(out)])
print(json.loads((out / "manifest.json").read_text()))
main(["verify", "--manifest", str(out / "manifest.json")])
