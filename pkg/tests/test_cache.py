import json
import threading

from soergel.cache import CACHE_VERSION, KLCache, default_cache_path, record_key
from soergel.coxeter import CoxeterMatrix, as_system
from soergel.hecke import HeckeAlgebra


def fresh(m, cache):
    H = HeckeAlgebra(as_system(CoxeterMatrix.dihedral(m)))
    H.cache = cache
    return H


def test_default_path_follows_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SOERGEL_CACHE", str(tmp_path / "x.jsonl"))
    assert default_cache_path() == tmp_path / "x.jsonl"
    monkeypatch.delenv("SOERGEL_CACHE")
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path))
    assert default_cache_path() == tmp_path / "soergel" / "kl-cache.jsonl"


def test_round_trip_is_exact(tmp_path):
    path = tmp_path / "c.jsonl"
    H = fresh(5, KLCache(path))
    x = H.system.element("s t s t s")
    C = H.kl_basis(x)
    lines = path.read_text().splitlines()
    assert len(lines) == x.length + 1  # one record per element on the recursion path
    rec = json.loads(lines[-1])
    assert rec["v"] == CACHE_VERSION and rec["x"] == "s t s t s"
    assert rec["key"] == record_key(H.system.matrix.canonical_json(), "s t s t s")
    assert rec["cprime"][0] == ["", "1*v^5"]
    H2 = fresh(5, KLCache(path))
    assert H2.kl_basis(x) == C
    assert H2.cache.hits == 1 and len(H2._kl) == 1


def test_records_for_different_groups_do_not_collide(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = KLCache(path)
    C3 = fresh(3, cache).kl_basis(as_system(CoxeterMatrix.dihedral(3)).element("s t"))
    C4 = fresh(4, cache).kl_basis(as_system(CoxeterMatrix.dihedral(4)).element("s t"))
    again = KLCache(path)
    assert fresh(3, again).kl_basis(C3.system.element("s t")) == C3
    assert fresh(4, again).kl_basis(C4.system.element("s t")) == C4


def test_bad_lines_are_skipped(tmp_path):
    path = tmp_path / "c.jsonl"
    H = fresh(3, KLCache(path))
    x = H.system.element("s t")
    good = H.kl_basis(x)
    key = record_key(H.system.matrix.canonical_json(), "s t")
    with open(path, "a") as fh:
        fh.write("not json at all\n")
        fh.write(json.dumps({"v": 2, "key": "abc", "x": "s", "cprime": []}) + "\n")
        fh.write(json.dumps({"v": 1, "key": 5}) + "\n")
        fh.write('{"v":1,"key":"' + key[:10])  # torn final line from a crashed writer
    c = KLCache(path)
    H2 = fresh(3, c)
    assert H2.kl_basis(x) == good
    assert c.skipped == 3


def test_first_record_wins_and_garbage_payload_is_a_miss(tmp_path):
    path = tmp_path / "c.jsonl"
    W = as_system(CoxeterMatrix.dihedral(6))
    key = record_key(W.matrix.canonical_json(), "s")
    path.write_text(json.dumps({"v": 1, "key": key, "x": "s", "cprime": [["", "v+1"]]}) + "\n")
    c = KLCache(path)
    H = fresh(6, c)
    C = H.kl_basis(W.gen("s"))
    assert C == H.cs("s")
    assert c.misses >= 1


def test_concurrent_writers_produce_parseable_file(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = KLCache(path)
    W = as_system(CoxeterMatrix.dihedral(8))
    elems = W.elements_up_to_length(8)

    def work(chunk):
        H = fresh(8, cache)
        for x in chunk:
            H.kl_basis(x)

    threads = [threading.Thread(target=work, args=(elems[i::4],)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    lines = path.read_text().splitlines()
    recs = [json.loads(line) for line in lines]
    assert len({r["key"] for r in recs}) == len(recs) == len(elems)
    assert len(KLCache(path)) == len(elems)


def test_unwritable_cache_does_not_break_computation(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cache = KLCache(blocker / "sub" / "c.jsonl")  # parent is a regular file
    H = fresh(3, cache)
    assert H.kl_basis(H.system.element("s t s")) is not None
