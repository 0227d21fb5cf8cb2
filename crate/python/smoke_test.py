"""Smoke test for the `warped_cas` Python extension.

Build the extension first:

    cargo build --release -p warped-cas-py

then run `python3 python/smoke_test.py`. If `warped_cas` is not installed,
the script loads the freshly built library from `target/release`.
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import warped_cas

        return warped_cas
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("libwarped_cas_py.so", "libwarped_cas_py.dylib", "warped_cas_py.dll"):
        path = root / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("warped_cas", str(path))
            spec = importlib.util.spec_from_loader("warped_cas", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            sys.modules["warped_cas"] = module
            return module
    sys.exit("warped_cas extension not found; run `cargo build --release -p warped-cas-py`")


def main():
    wc = load()

    s = wc.Surface.generate(family="harmonic_exp", theta_deg=60, grid=16)
    u0, u1, v0, v1 = s.domain
    u, v = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
    assert abs(min(s.angle(u, v), math.pi - s.angle(u, v)) - math.pi / 3) < 1e-12
    geo = s.geometry(u, v)
    assert abs(abs(geo["mean_curvature"]) - 1.25) < 1e-12, geo["mean_curvature"]
    assert abs(s.gauss_curvature(u, v)) < 1e-8
    report = s.verify("harmonic", grid=16)
    assert report["pass"], report

    t2 = wc.Surface.generate(family="type_ii", warping="linear:1,1", theta_deg=45, grid=16)
    assert t2.verify("all", grid=16)["pass"]
    assert t2.classify(grid=16)["verdict"] == "TYPE_II"

    t1 = wc.Surface.generate(family="type_i", warping="exp", theta_deg=60, alpha="0.1*v^2")
    c = t1.classify(grid=32)
    assert c["verdict"] == "TYPE_I", c["verdict"]

    slice_ = wc.Surface.from_expression("(t0, u, v)", warping="exp", constants=[("t0", 0.5)])
    assert slice_.classify(grid=8)["verdict"] == "TYPE_III"
    bent = wc.Surface.from_expression("(u, u*u, v)", warping="constant:1")
    assert bent.classify(grid=16)["verdict"] == "NOT_CONSTANT_ANGLE"

    vertices, triangles = s.mesh(grid=8, model="half_space")
    assert len(vertices) == 64 and len(triangles) == 2 * 7 * 7
    assert all(z > 0 for _, _, z in vertices)

    assert abs(wc.minimal_theta(1 / 3) - math.pi / 4) < 1e-15
    assert wc.to_half_space(0.0, 1.0, 2.0) == (1.0, 2.0, 1.0)
    assert "harmonic" in wc.suites()

    try:
        wc.Surface.generate(family="type_ii", warping="linear:1,1", theta_deg=0)
    except ValueError:
        pass
    else:
        raise AssertionError("theta = 0 should be rejected for type_ii")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
