"""Builds the extension module and runs a few checks against it.

    python3 crates/python/python/smoke_test.py
"""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[3]


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "digrow-py"], cwd=ROOT, check=True
    )
    lib = ROOT / "target" / "release" / "libdigrow_py.so"
    out = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, out / "digrow.so")
    sys.path.insert(0, str(out))


def main():
    build()
    import digrow

    x = digrow.Alphabet(["a", "b"])
    u, v = x.disequence("[a b]@2"), x.disequence("[b]@1")
    assert str(u.lprod(v)) == "[a b b]@3"
    assert str(u.rprod(v)) == "[a b b]@2"
    assert len(x.disequences_of_length(3)) == 3 * 8

    e, f, g = x.element("[a]@1 + 2*[b a]@2"), x.element("[b]@1"), x.element("-[a b]@1")
    assert all(r.is_zero() for r in digrow.axiom_residuals(e, f, g))

    free = digrow.Presentation.free(["a"])
    assert digrow.growth_series(free, 10) == [n * (n + 1) // 2 for n in range(1, 11)]
    assert digrow.growth_series(free, 10, "assoc") == list(range(1, 11))

    comm = digrow.Presentation.free(["a", "b"]).with_scheme("lcomm").with_scheme("rcomm")
    est = digrow.gk_estimate(digrow.growth_series(comm, 64), (16, 64))
    assert abs(est["slope"] - 2) < 0.15, est

    remark = digrow.Presentation.parse(
        "field Q\ngenerators a b\nrel [b]@1 - [a a]@2 + [a a]@1\n"
    ).with_slack(2)
    table = digrow.basis_upto(remark, 6)
    assert table.approximate
    assert [table.count_at(t) for t in range(1, 4)] == [2, 3, 4]
    nf = table.normal_form(remark.element("[a a]@2"))
    assert str(nf) == "[b]@1 + [a a]@1", nf
    assert json.loads(table.to_json())["mode"] == "dialgebra"

    try:
        digrow.Alphabet(["a", "a"])
    except ValueError:
        pass
    else:
        raise AssertionError("duplicate generator accepted")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
