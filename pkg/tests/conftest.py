import os
from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stoch2c.complex import SimplicialComplex2

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def complexes(draw, max_vertices: int = 6):
    """Random downward-closed complexes on vertices 0..max_vertices-1."""
    n = draw(st.integers(0, max_vertices))
    tris = draw(st.lists(st.sampled_from(list(combinations(range(n), 3)) or [None]),
                         unique=True, max_size=6)) if n >= 3 else []
    edges = draw(st.lists(st.sampled_from(list(combinations(range(n), 2)) or [None]),
                          unique=True, max_size=8)) if n >= 2 else []
    verts = draw(st.lists(st.integers(0, max(n - 1, 0)), unique=True, max_size=n)) if n else []
    simplices = [t for t in tris if t] + [e for e in edges if e] + [(v,) for v in verts]
    return SimplicialComplex2.from_simplices(simplices)


def embedding_battery():
    """Fixed (source, host) pairs for the embedding oracle: every source in
    the catalogue against sampled hosts on at most 9 vertices."""
    from stoch2c.complex import from_maximal_simplices, full_simplex
    from stoch2c.embedding import torus_7
    from stoch2c.model import sample_Y

    sources = {
        "edge": from_maximal_simplices([(0, 1)]),
        "path": from_maximal_simplices([(0, 1), (1, 2)]),
        "triangle": from_maximal_simplices([(0, 1, 2)]),
        "two-triangles": from_maximal_simplices([(0, 1, 2), (1, 2, 3)]),
    }
    ps = [(1, 1, 1), (1, 0.8, 0.7), (0.9, 0.6, 0.5), (1, 0.5, 0.3), (0.7, 0.9, 0.9)]
    pairs = []
    for name, s in sources.items():
        for seed in range(12):
            n = 4 + seed % 6
            pairs.append((name, s, sample_Y(n, ps[seed % len(ps)], 1000 + seed)))
    torus = torus_7()
    shifted = from_maximal_simplices([tuple(v + 1 for v in t) for t in torus.triangles])
    hosts = [torus, shifted.union(from_maximal_simplices([(0, 1, 2)])), full_simplex(7),
             sample_Y(8, (1, 1, 0.97), 7), sample_Y(7, (1, 1, 0.95), 3)]
    pairs += [("torus7", torus, h) for h in hosts]
    return pairs


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
