import json

import pytest

import hmf


def test_embedding_set_basics():
    s = hmf.EmbeddingSet([(3, 1, 2)])
    assert s.size == 2
    assert s.p == 3
    e0 = s.embedding(0)
    assert (e0.i, e0.j) == (0, 1)
    assert s.nu(e0) == 3
    e1 = s.phi(e0, True)
    assert e1.j == 2
    back = s.phi(e1, False)
    assert (back.i, back.j) == (e0.i, e0.j)


def test_lattice_values():
    assert hmf.lattice_index(hmf.EmbeddingSet([(3, 1, 2)])) == 2
    assert hmf.lattice_index(hmf.EmbeddingSet([(3, 2, 1)])) == 8
    assert hmf.lattice_index(hmf.EmbeddingSet([(2, 1, 1), (2, 1, 1)])) == 1


def test_hasse_compare():
    s = hmf.EmbeddingSet([(3, 1, 2)])
    d = hmf.hasse_compare(s, [2, 4], [0, 0])
    assert d["comparable"] and d["integral"] and d["hasse_le"]
    assert d["r"] == ["3", "5"]
    frac = hmf.hasse_compare(s, [1, 2], [1, 1])
    assert not frac["integral"]
    assert frac["r"][0] == "1/2"


def test_cones_and_lambda():
    s = hmf.EmbeddingSet([(3, 1, 2)])
    assert hmf.in_min_cone(s, [1, 2], positive=True)
    assert not hmf.in_min_cone(s, [1, 4], positive=True)
    assert hmf.lambda_equal(s, [-1, 3], [0, 0])
    assert hmf.hasse_weight(s, 0) == [-1, 3]
    assert hmf.is_irreducible_weight(s, [2, 4])


def test_local_shape_decisions():
    assert hmf.pw1_lift_decision(5, "red:psi=0,chi=2,ext=invchi", 3, 0)
    assert hmf.pw1_lift_decision(5, "irr:xi=2", 3, 0)
    assert not hmf.pw1_lift_decision(5, "red:psi=1,chi=2,ext=invchi", 3, 0)
    with pytest.raises(hmf.HmfError):
        hmf.pw1_lift_decision(5, "irr:xi=2", 9, 0)

    table = dict(hmf.theta_cycle_table(5, "irr:xi=2"))
    assert table[0] == [3]

    assert hmf.weight2_membership(7, "red:psi=3,chi=4,ext=invchi", 3, 2) == "yes"
    assert hmf.vchi_dim(0, 4, True) == 2


def test_quado_bookkeeping():
    assert hmf.degeneracy(5, 1, 2, [[0, 2]], 0) == (1, 0)
    assert hmf.inertial_pairs(5, 1, 2, [[0, 2]]) == [(0, 2)]
    sts = hmf.allowed_st(3, 1, 5)
    assert (3, 1, 0) in sts and (4, 0, 1) in sts
    assert hmf.y_support(4, 1, 4) == [0, 1]


def test_kisin_counts_and_morphisms():
    assert hmf.ext_dimension(3, 3, 2, 1, 1, 1) == 1
    assert hmf.ext_dimension(3, 3, 1, 1, 1, 1) == 2
    assert hmf.ext_dimension(3, 3, 1, 1, 1, 2) == 1
    assert hmf.ext_dimension(3, 9, 1, 1, 4, 4) == 2
    assert hmf.check_morphism_family("w=p", 5, 5, 2, 3, 4)
    assert hmf.check_morphism_family("w=p+1", 3, 9, 2, 5, 7)


def test_qexp_operators():
    cfg = hmf.demo_config(3)
    form_json = json.dumps(
        {
            "field": {"D": 3, "p": 3},
            "weight": {"k": [1, 2], "m": [-1, -1]},
            "window": {"trace_bound": 20},
            "coeffs": [{"t": "c0", "mu": [2, 1], "val": 2}],
        }
    )
    f = hmf.load_form(form_json, cfg)
    tf = hmf.apply_op(f, "theta")
    out = json.loads(tf.json)
    assert out["weight"]["k"] == [2, 3]
    coeff = {tuple(c["mu"]): c["val"] for c in out["coeffs"] if c["t"] == "c0"}
    assert coeff[(2, 1)] == 1  # residue 2 times the stored 2, mod 3

    # Theta kills the image of the partial Frobenius
    assert hmf.apply_op(hmf.apply_op(f, "vp"), "theta").is_zero

    # twisting by the genus character scales the c1 component
    tw = hmf.apply_twist(f, "genus")
    assert json.loads(tw.json)["weight"]["m"] == [-1, -1]

    # multiplying by a weight shifter moves the weight and keeps values
    hf = hmf.apply_hasse(f, 2, [], "H")
    assert json.loads(hf.json)["weight"]["k"] == [2, 1]  # k + (1, -1)
    assert hmf.forms_equal_on_common_window(hf, f)
    assert hmf.is_strongly_stabilized(f)  # unit-depth support only


def test_eigen_build():
    cfg = hmf.demo_config(5)
    spec = json.dumps(
        {
            "weight": {"k": [2, 2], "m": [-1, -1]},
            "base": {"t": "c0", "mu": [1, 0]},
            "eigenvalues": [
                {"label": "v2", "a": 1, "d": 1},
                {"label": "v3", "a": 2, "d": 1},
            ],
            "window": {"trace_bound": 30},
        }
    )
    f = hmf.eigen_build_json(cfg, spec)
    out = json.loads(f.json)
    coeff = {tuple(c["mu"]): c["val"] for c in out["coeffs"]}
    assert coeff[(1, 0)] == 1
