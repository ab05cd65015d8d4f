import itertools
import random
import warnings

import pytest

from magicpol import (
    DataError,
    DataWarning,
    EmptyModelError,
    ModelConfig,
    UnsupportedTargetError,
    build_model,
    find_coincidences,
    load_dataset,
    load_dipoles,
    load_levels,
)
from magicpol.atomdata import Dataset, Level, dipole_allowed, write_dipoles, write_levels

LEVELS = """# test levels
label,n,l,two_j,energy_cm1,source
5s1/2,5,0,1,0.0,t
5p1/2,5,1,1,12578.95,t
5p3/2,5,1,3,12816.55,t
4d5/2,4,2,5,19355.2,t
4d3/2,4,2,3,19355.65,t
6s1/2,6,0,1,20132.51,t
6p1/2,6,1,1,23715.08,t
6p3/2,6,1,3,23792.59,t
"""

DIPOLES = """state_a,state_b,reduced_me_au,uncertainty_au,source
5s1/2,5p1/2,4.231,0.003,t
5s1/2,5p3/2,5.977,0.005,t
5s1/2,6p1/2,0.333,0.003,t
5s1/2,6p3/2,0.541,0.005,t
6s1/2,5p1/2,4.1,0.1,t
"""


@pytest.fixture
def files(tmp_path):
    lv = tmp_path / "levels.csv"
    dp = tmp_path / "dipoles.csv"
    lv.write_text(LEVELS)
    dp.write_text(DIPOLES)
    return lv, dp


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_small_file(files):
    levels = load_levels(files[0])
    assert len(levels) == 8
    ds = load_dataset(*files)
    assert ds.ground.label == "5s1/2"
    assert ds.level("5s").label == "5s1/2"
    assert ds.level("6p3/2").energy_cm == 23792.59
    assert len(ds.dipoles) == 5


def test_bundled_dataset(rb):
    assert rb.ground.label == "5s1/2"
    assert rb.level("15s1/2").n == 15
    d = rb.dipole(rb.level("5s1/2"), rb.level("5p3/2"))
    assert (d.value, d.uncertainty) == (5.977, 0.005)
    assert all(lv.energy_cm >= 0 for lv in rb.levels.values())


def test_ambiguous_and_unknown_labels(rb):
    with pytest.raises(KeyError, match="ambiguous"):
        rb.level("5p")
    with pytest.raises(KeyError, match="unknown"):
        rb.level("99z")


def test_duplicate_level_names_both_lines(tmp_path):
    text = LEVELS + "5p3/2,5,1,3,12816.6,dup\n"
    p = write(tmp_path, "dup.csv", text)
    with pytest.raises(DataError) as exc:
        load_levels(p)
    msg = str(exc.value)
    assert "line 5" in msg and ":11:" in msg
    assert exc.value.line == 11


def test_bad_j(tmp_path):
    p = write(tmp_path, "bad.csv", LEVELS + "7s3/2,7,0,3,26311.4,t\n")
    with pytest.raises(DataError, match="not l"):
        load_levels(p)


def test_missing_ground(tmp_path):
    p = write(tmp_path, "ng.csv", LEVELS.replace("5s1/2,5,0,1,0.0", "5s1/2,5,0,1,1.0"))
    with pytest.raises(DataError, match="ground"):
        load_levels(p)


def test_bad_header_and_numbers(tmp_path):
    with pytest.raises(DataError, match="header"):
        load_levels(write(tmp_path, "h.csv", "name,n,l,j,e,src\n"))
    with pytest.raises(DataError, match=":3:"):
        load_levels(write(tmp_path, "n.csv", "label,n,l,two_j,energy_cm1,source\n5s1/2,5,0,1,0.0,t\nx,five,0,1,1,t\n"))
    with pytest.raises(DataError, match="cannot read"):
        load_levels(tmp_path / "missing.csv")


def test_dipole_errors(files, tmp_path):
    levels = load_levels(files[0])
    head = "state_a,state_b,reduced_me_au,uncertainty_au,source\n"
    with pytest.raises(DataError, match="selection"):
        load_dipoles(write(tmp_path, "ss.csv", head + "5s1/2,5s1/2,1.0,0,t\n"), levels)
    with pytest.raises(DataError, match="unresolved"):
        load_dipoles(write(tmp_path, "u.csv", head + "5s1/2,4f5/2,1.0,0,t\n"), levels)
    with pytest.raises(DataError, match="duplicate pair"):
        load_dipoles(write(tmp_path, "d.csv", head + "5s1/2,5p1/2,1,0,t\n5p1/2,5s1/2,1,0,t\n"), levels)
    with pytest.raises(DataError, match="uncertainty"):
        load_dipoles(write(tmp_path, "n.csv", head + "5s1/2,5p1/2,1,-1,t\n"), levels)


def test_dipole_row_accepted(files, tmp_path):
    levels = load_levels(files[0])
    out = load_dipoles(write(tmp_path, "ok.csv", "state_a,state_b,reduced_me_au,uncertainty_au,source\n"
                                                 "5s1/2,5p3/2,5.977,0.005,t\n"), levels)
    (d,) = out.values()
    assert d.value == 5.977 and d.state_b.label == "5p3/2"


def test_round_trip(rb, tmp_path):
    lv, dp = tmp_path / "l.csv", tmp_path / "d.csv"
    write_levels(lv, rb.levels)
    write_dipoles(dp, rb.dipoles)
    again = load_dataset(lv, dp)
    assert again.levels == rb.levels
    assert again.dipoles == rb.dipoles


def test_build_model_5s_n8(rb, rb_config):
    cfg = ModelConfig(n_max=8, tails=rb_config.tails)
    m = build_model(rb.level("5s1/2"), rb, cfg)
    assert [lv.label for lv in m.intermediates] == [
        f"{n}p{j}/2" for n in range(5, 9) for j in (1, 3)
    ]
    assert m.tail_alpha == pytest.approx(0.2 + (-0.3))
    assert m.core_alpha == 9.1 and m.core_alpha_rel_unc == 0.05


def test_build_model_15s_truncation(model_15s):
    ns = [lv.n for lv in model_15s.intermediates]
    assert min(ns) == 5 and max(ns) == 23
    assert ns == sorted(ns)
    assert model_15s.tail_alpha == 0.0


def test_build_model_channels_obey_selection_rules(rb, rb_config):
    for lv in rb.levels.values():
        if lv.l != 0:
            continue
        m = build_model(lv, rb, rb_config)
        for inter, d in m.channels:
            assert abs(inter.l - lv.l) == 1 and abs(inter.two_j - lv.two_j) <= 2
            assert inter.n <= m.n_max
            assert lv in (d.state_a, d.state_b)


def test_build_model_errors(files, rb):
    ds = load_dataset(*files)
    with pytest.raises(UnsupportedTargetError):
        build_model(rb.level("5p3/2"), rb)
    with pytest.raises(EmptyModelError):
        build_model(ds.level("5s1/2"), ds, ModelConfig(n_max=4))


def test_ragged_fine_structure_warns(files):
    ds = load_dataset(*files)
    with pytest.warns(DataWarning, match="5p3/2"):
        m = build_model(ds.level("6s1/2"), ds)
    assert len(m) == 1


def test_model_rejects_bad_halfwidth(model_5s):
    from dataclasses import replace

    with pytest.raises(ValueError):
        replace(model_5s, exclusion_halfwidth=0.0)


def _brute(levels, pair, tol, allowed):
    a, b = pair
    target = abs(b.energy_cm - a.energy_cm)
    out = []
    for x, y in itertools.combinations(levels, 2):
        if {x.label, y.label} == {a.label, b.label}:
            continue
        if allowed and not dipole_allowed(x, y):
            continue
        mis = abs(abs(y.energy_cm - x.energy_cm) - target)
        if mis <= tol:
            out.append((round(mis, 9), tuple(sorted((x.label, y.label)))))
    return sorted(out)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("allowed", [False, True])
def test_coincidences_match_brute_force(rb, seed, allowed):
    rng = random.Random(seed)
    pool = rng.sample(sorted(rb.levels.values(), key=lambda lv: lv.label), 50)
    a, b = rng.sample(pool, 2)
    tol = rng.uniform(50, 3000)
    got = find_coincidences(pool, (a, b), tol, selection_filter=allowed)
    want = _brute(pool, (a, b), tol, allowed)
    assert sorted((round(c.mismatch, 9), tuple(sorted(l.label for l in c.pair))) for c in got) == want
    mism = [c.mismatch for c in got]
    assert mism == sorted(mism)
    assert all(m <= tol for m in mism)
    for c in got:
        assert c.mismatch == pytest.approx(abs(c.delta_e - c.target_delta_e), abs=1e-9)


def test_coincidence_edge_cases(rb):
    pair = (rb.level("5s1/2"), rb.level("5p3/2"))
    assert find_coincidences(rb, pair, 0.001) == []
    hits = find_coincidences(rb, pair, 1e5)
    assert all({c.pair[0].label, c.pair[1].label} != {"5s1/2", "5p3/2"} for c in hits)
    with pytest.raises(ValueError):
        find_coincidences(rb, pair, 0.0)


def test_level_properties():
    lv = Level("15p3/2", 15, 1, 3, 33000.0, "x")
    assert lv.j == 1.5
    assert lv.configuration == "15p"
    assert Dataset({"15p3/2": lv}, {}).level("15p3/2") is lv
