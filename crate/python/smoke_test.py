"""Smoke test for the pyprofend extension.

Build and run from the repository root:

    cargo build --release -p profend-py
    cp target/release/libpyprofend.so python/pyprofend.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyprofend as pf  # noqa: E402


def check_groups():
    s3 = pf.Group.symmetric(3)
    assert s3.order == 6 and not s3.is_abelian()
    assert s3.count_profile(3) == {1: 1, 2: 1, 3: 3}
    d8 = pf.Group.dihedral(4)
    assert len(d8.normal_subgroups()) == 6
    assert len(d8.residual(2)) == 2
    a4 = pf.Group.alternating(4)
    assert len(a4.o_pi([3])) == 4
    z6 = pf.Group.from_table([[(a + b) % 6 for b in range(6)] for a in range(6)])
    assert z6.order == 6 and z6.is_abelian()
    try:
        pf.Group.from_table([[0, 1], [0, 1]])
    except pf.ProfendError:
        pass
    else:
        raise AssertionError("bad table accepted")


def check_contraction():
    for k in (1, 2, 3):
        g = pf.Group.units_semidirect(3, k)
        phi = pf.Endo.scale_first(g, 3)
        r = phi.contraction()
        assert len(r["con"]) == 3**k
        assert len(r["stable_image"]) == 2 * 3 ** (k - 1)
        assert r["con"].is_normal()
        assert phi.verify_theorem_a()["passed"]

    z = pf.Group.direct_product(pf.Group.cyclic(4), pf.Group.cyclic(9))
    a, b = pf.Endo.scale(z, 0, 2), pf.Endo.scale(z, 1, 3)
    assert a.commutes_with(b)
    split = pf.verify_splitthm([a, b])
    assert split["passed"] and split["checks"]["cap_of_con_trivial"]
    both = pf.semigroup_contraction([a, b])
    assert len(both["con"]) == 36 and both["stable_image"].is_trivial()

    f = pf.Endo(pf.Group.cyclic(8), [(2 * x) % 8 for x in range(8)])
    assert f(3) == 6
    assert len(f.kernel()) * len(f.image()) == 8
    assert f.power(3) == pf.Endo.trivial(pf.Group.cyclic(8))


def check_searches():
    z4 = pf.Group.cyclic(4)
    r = pf.hom_search(z4, z4.subgroup([2]))
    assert r["count"] == 0
    assert r["witness"] is not None and r["witness"].index() == 2

    d8 = pf.Group.dihedral(4)
    reg = pf.verify_regulation([pf.Endo.scale_first(d8, 2)])
    assert reg["passed"]
    assert reg["residuals"][-1] == (8, 1)


def check_reports():
    a = pf.demo(3, 3, seed=1)
    b = pf.demo(3, 3, seed=1)
    assert a == b
    report = json.loads(a)
    assert report["analyses"][0]["details"]["con"] == [3, 9, 27]
    assert all(x["status"] == "pass" for x in report["analyses"])

    neg = json.loads(pf.run_scenario("tower T = s3_times_z2 depth 3\nanalyze theorem_b(T)\n"))
    assert neg["analyses"][0]["status"] == "hypotheses_not_met"

    try:
        pf.run_scenario("group G = cyclic(4\n")
    except pf.ScenarioError as e:
        assert str(e).startswith("1:")
    else:
        raise AssertionError("malformed scenario accepted")

    results = pf.selftest()
    assert len(results) == 10
    failed = [r for r in results if not r[2]]
    assert not failed, failed


def main():
    print("pyprofend", pf.__version__)
    for check in (check_groups, check_contraction, check_searches, check_reports):
        check()
        print("ok", check.__name__)


if __name__ == "__main__":
    main()
