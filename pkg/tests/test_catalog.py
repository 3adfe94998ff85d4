import json

import pytest

from upbforge.catalog import (
    BASES,
    CompleteBasis,
    ExistenceFact,
    FactSource,
    dump_upb,
    embed,
    existence_facts,
    export_upb,
    gentiles_missing,
    import_upb,
    load_upb,
    min_upb_size,
    restrict,
)
from upbforge.states import UpbError, missing_number
from upbforge.verifier import check_orthonormality


@pytest.mark.parametrize("name", sorted(BASES))
def test_catalog_entries_are_orthogonal(name):
    u = BASES[name]()
    assert u.dims.dims == (3, 3)
    assert len(u.states) == 5
    assert check_orthonormality(u)


def test_shifted_is_tiles_on_right_block(tiles, shifted_verbatim):
    assert set(embed(tiles, 1, 3, 6).states) == set(shifted_verbatim.states)
    back = restrict(shifted_verbatim, party=1, offset=3, dim=3)
    assert set(back.states) == set(tiles.states)


def test_embed_out_of_range(tiles):
    with pytest.raises(UpbError) as exc:
        embed(tiles, 1, 2, 4)
    assert exc.value.code == "block_out_of_range"


def test_complete_basis():
    cb = CompleteBasis((2, 3))
    assert cb.size == 6 == len(cb.states)
    assert cb.label == "complete(2x3)"
    assert check_orthonormality(cb.states)
    assert CompleteBasis((3, 1)).size == 3


def test_export_import_round_trip(tmp_path, tiles):
    doc = export_upb(tiles)
    assert doc["schema"] == "upb/1"
    assert doc["states"][0] == [[["1", "0"], ["0", "0"], ["0", "0"]],
                                [["1", "0"], ["-1", "0"], ["0", "0"]]]
    back = import_upb(json.loads(json.dumps(doc)))
    assert back.states == tiles.states and back.label == "tiles3x3"
    path = tmp_path / "t.json"
    dump_upb(tiles, path)
    assert load_upb(path).states == tiles.states


@pytest.mark.parametrize("mutate,code", [
    (lambda d: d.pop("states"), "malformed"),
    (lambda d: d.__setitem__("dims", [3, 1]), "dims_invalid"),
    (lambda d: d.__setitem__("dims", [3, 4]), "dims_mismatch"),
    (lambda d: d["states"][0][0][0].__setitem__(0, "0.5"), "malformed_rational"),
    (lambda d: d["states"][0].__setitem__(0, [["0", "0"]] * 3), "zero_factor"),
    (lambda d: d["states"][1].__setitem__(0, [["1", "0"], ["0", "0"], ["0", "0"]]), "not_orthogonal"),
])
def test_import_errors(tiles, mutate, code):
    doc = json.loads(json.dumps(export_upb(tiles)))
    mutate(doc)
    with pytest.raises(UpbError) as exc:
        import_upb(doc)
    assert exc.value.code == code


def test_import_malformed_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(UpbError) as exc:
        load_upb(p)
    assert exc.value.code == "malformed"


@pytest.mark.parametrize("d1,d2,size", [(3, 3, 5), (3, 4, 6), (4, 4, 8), (5, 6, 10), (6, 6, 12)])
def test_min_upb_size(d1, d2, size):
    assert min_upb_size(d1, d2) == size


@pytest.mark.parametrize("m,n", [(3, 4), (4, 7), (6, 6), (10, 14)])
def test_gentiles_missing(m, n):
    assert gentiles_missing(m, n) == 2 * m - 1


@pytest.mark.parametrize("call", [lambda: min_upb_size(2, 5), lambda: gentiles_missing(3, 3),
                                  lambda: gentiles_missing(5, 4)])
def test_size_fact_hypotheses(call):
    with pytest.raises(UpbError) as exc:
        call()
    assert exc.value.code == "hypothesis"


def test_existence_facts_cover_seeds():
    facts = existence_facts(4, 4)
    seeds = {f.missing for f in facts if f.source is FactSource.TABLE1_SEED and f.dims == (3, 4)}
    assert seeds == {4, 5, 6}
    assert all(1 <= f.size < f.dims[0] * f.dims[1] for f in facts)
    with pytest.raises(UpbError):
        ExistenceFact((3, 3), 9, FactSource.MIN_SIZE)


def test_missing_number_of_catalog(tiles):
    assert missing_number(tiles) == 4
