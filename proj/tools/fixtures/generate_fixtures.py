#!/usr/bin/env python3
"""Generate generator files and reference data for the test fixtures.

Uses SnapPy as the independent reference tool.  For each manifold the
Dirichlet domain is computed by SnapPy at its own injectivity-radius
maximizing basepoint; the face-pairing matrices of two chosen faces become
the generators, so the origin of the output frame is that basepoint.
Relators are SnapPy's relators rewritten in the chosen generators.

Usage: python3 generate_fixtures.py OUTPUT_DIR
"""

import json
import sys

import numpy as np
import snappy

# name, SnapPy manifold, face-pairing words (in SnapPy's unsimplified
# generators) used as our generators, substitution rules for the remaining
# original generators expressed in the chosen ones.
FIXTURES = [
    {
        "name": "weeks",
        "manifold": "m003(-3,1)",
        "generators": ["a", "c"],
        # BCaC = 1  =>  b = CaC
        "substitute": {"b": "CaC"},
        "cutoff": 1.5,
    },
    {
        "name": "m004",
        "manifold": "m004",
        "generators": ["a", "b"],
        # BacA = 1  =>  c = Aba
        "substitute": {"c": "Aba"},
        "cutoff": 1.5,
    },
]

PAULI = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, 1j], [-1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


def herm(x):
    return sum(x[k] * PAULI[k] for k in range(4))


def snappy_to_ours(m):
    """SnapPy orders Minkowski coordinates as (x0, x3, x1, x2)."""
    perm = [0, 2, 3, 1]
    out = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            out[i, j] = float(m[perm[i], perm[j]])
    return out


def o31_to_sl2c(L):
    """Recover g in SL(2,C) with g H(p) g^* = H(L p)."""
    H = [herm(L[:, k]) for k in range(4)]
    top = (H[0] + H[3]) / 2  # u u^*
    j = 0 if abs(top[0, 0]) >= abs(top[1, 1]) else 1
    u = top[:, j] / np.sqrt(top[j, j].real)
    uv = (H[1] - 1j * H[2]) / 2  # u v^*
    v = (u.conj() @ uv).conj() / np.vdot(u, u).real
    g = np.column_stack([u, v])
    g = g / np.sqrt(np.linalg.det(g))
    for k in range(4):
        assert np.allclose(g @ herm(np.eye(4)[k]) @ g.conj().T, H[k], atol=1e-9)
    return g


def invert_word(w):
    return w[::-1].swapcase()


def free_reduce(w):
    out = []
    for ch in w:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def rewrite(word, fixture):
    """Rewrite a word in SnapPy's original generators into signed indices."""
    gens = fixture["generators"]
    expanded = ""
    for ch in word:
        low = ch.lower()
        if low in fixture["substitute"]:
            sub = fixture["substitute"][low]
            expanded += sub if ch == low else invert_word(sub)
        else:
            expanded += ch
    expanded = free_reduce(expanded)
    out = []
    for ch in expanded:
        idx = gens.index(ch.lower()) + 1
        out.append(idx if ch.islower() else -idx)
    return out


def fmt(x):
    return repr(float(x))


def product(word, mats):
    m = np.eye(2, dtype=complex)
    for k in word:
        g = mats[abs(k) - 1]
        if k < 0:
            g = np.linalg.inv(g)
        m = m @ g
    return m


def generate(fixture, outdir):
    M = snappy.Manifold(fixture["manifold"])
    D = M.dirichlet_domain(include_words=True)
    words = D.pairing_words()
    pairing = D.pairing_matrices()
    mats = []
    for gname in fixture["generators"]:
        k = words.index(gname)
        mats.append(o31_to_sl2c(snappy_to_ours(pairing[k])))

    G = M.fundamental_group(False)
    relators = [r for r in (rewrite(w, fixture) for w in G.relators()) if r]
    for r in relators:
        m = product(r, mats)
        assert min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max()) < 1e-9, r

    volume = float(M.volume())
    with open(f"{outdir}/{fixture['name']}.gens", "w") as f:
        f.write(f"# {fixture['manifold']} generated by tools/fixtures/generate_fixtures.py\n")
        f.write(f"# SnapPy {snappy.__version__}; face pairings "
                f"{', '.join(fixture['generators'])} of SnapPy's Dirichlet domain\n")
        f.write(f"name: {fixture['name']}\n")
        f.write(f"reference_volume: {fmt(volume)}\n")
        for g in mats:
            entries = [g[0, 0], g[0, 1], g[1, 0], g[1, 1]]
            f.write("generator: " + " ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in entries) + "\n")
        for r in relators:
            f.write("relator: " + " ".join(str(k) for k in r) + "\n")

    # Reference Dirichlet domain rebuilt from our generators at the origin.
    o31 = []
    for g in mats:
        L = np.zeros((4, 4))
        for k in range(4):
            P = g @ herm(np.eye(4)[k]) @ g.conj().T
            L[:, k] = [(P[0, 0] + P[1, 1]).real / 2, P[0, 1].real, P[0, 1].imag,
                       (P[0, 0] - P[1, 1]).real / 2]
        perm = [0, 3, 1, 2]
        o31.append(np.array([[L[perm[i], perm[j]] for j in range(4)] for i in range(4)]))
    D0 = snappy.DirichletDomain(O31_generators=o31, maximize_injectivity_radius=False,
                                centroid_at_origin=False)

    spectrum = []
    for entry in M.length_spectrum(fixture["cutoff"]):
        z = complex(entry["length"])
        spectrum.append({"lambda": z.real, "theta": z.imag,
                         "multiplicity": int(entry["multiplicity"])})

    oracle = {
        "manifold": fixture["manifold"],
        "tool": f"SnapPy {snappy.__version__}",
        "volume": volume,
        "domain_at_origin": {
            "vertices": D0.num_vertices(),
            "finite_vertices": D0.num_finite_vertices(),
            "ideal_vertices": D0.num_ideal_vertices(),
            "edges": D0.num_edges(),
            "faces": D0.num_faces(),
            "in_radius": float(D0.in_radius()),
            "spine_radius": float(D0.spine_radius()),
            "volume": float(D0.volume()),
        },
        "spectrum_cutoff": fixture["cutoff"],
        "spectrum": spectrum,
    }
    with open(f"{outdir}/{fixture['name']}.oracle.json", "w") as f:
        json.dump(oracle, f, indent=2)
        f.write("\n")


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    for fixture in FIXTURES:
        generate(fixture, outdir)


if __name__ == "__main__":
    main()
