import numpy as np
import pytest

from tridesign.datasets import as_certificate, load_dataset
from tridesign.designs import verify_design
from tridesign.gf2n import build_field
from tridesign.lines import canonical_line
from tridesign.orbits import (OrbitCertificate,
                              OrbitCollisionError, certificate_from_json_dict,
                              cy_gamma, cyclotomic_class, expand_certificate,
                              frobenius_reps, gamma, gamma_key,
                              is_triangle_orbit, orbit_key_of_line)


def gamma_oracle(ctx, k):
    """Independent closure computation by direct field arithmetic."""
    M = ctx.order
    out = {k % M}
    changed = True
    while changed:
        changed = False
        for s in list(out):
            for nxt in ((-s) % M, ctx.log(1 ^ ctx.exp(s))):
                if nxt not in out:
                    out.add(nxt)
                    changed = True
    return tuple(sorted(out))


def test_gamma_n7_k1(f7):
    assert gamma(f7, 1) == (1, 6, 7, 120, 121, 126)
    assert gamma(f7, 1) == gamma_oracle(f7, 1)


def test_gamma_degenerate_n6(f6):
    assert gamma(f6, 21) == (21, 42)
    assert gamma(f6, 42) == (21, 42)


def test_gamma_invariance(f7):
    base = gamma(f7, 1)
    for k in base:
        assert gamma(f7, k) == base


def test_gamma_zero_rejected(f7):
    with pytest.raises(ValueError):
        gamma(f7, 0)
    with pytest.raises(ValueError):
        gamma(f7, 127)


def test_cyclotomic_class():
    assert cyclotomic_class(7, 1) == (1, 2, 4, 8, 16, 32, 64)
    assert cyclotomic_class(7, 0) == (0,)
    classes = {cyclotomic_class(7, k) for k in range(1, 127)}
    assert len(classes) == 18
    assert all(len(c) == 7 for c in classes)


def test_cy_gamma_sizes(f7, f13):
    assert len(cy_gamma(f7, 1)) == 42
    assert len(cy_gamma(f13, 3)) == 78


def test_cy_gamma_covers_everything_n7(f7):
    u = set(cy_gamma(f7, 1)) | set(cy_gamma(f7, 9)) | set(cy_gamma(f7, 117))
    assert u == set(range(1, 127))


def test_orbit_key_of_line(f7, f12):
    assert orbit_key_of_line(f7, canonical_line(1, f7.exp_table[1])) == 1
    scaled = canonical_line(f7.exp_table[2], f7.exp_table[3])
    assert orbit_key_of_line(f7, scaled) == 1  # same orbit
    # a line inside the order-64 subfield has a key divisible by 65
    sub = [f12.exp_table[65 * j] for j in (1, 2)]
    key = orbit_key_of_line(f12, canonical_line(*sub))
    assert key % 65 == 0


def test_is_triangle_orbit(f7):
    assert is_triangle_orbit(f7, 1, 9, 117)
    # computed-false triple (brute force over all 6^3 membership sums)
    assert not is_triangle_orbit(f7, 1, 2, 17)
    with pytest.raises(ValueError, match="distinct"):
        is_triangle_orbit(f7, 1, 6, 9)  # gamma(6) = gamma(1)


def test_is_triangle_orbit_brute_force(f7):
    M = f7.order
    for trip in ((1, 9, 117), (1, 2, 17), (1, 9, 116), (2, 3, 30)):
        g1, g2, g3 = (gamma(f7, k) for k in trip)
        oracle = any((s1 + s2 + s3) % M == 0
                     for s1 in g1 for s2 in g2 for s3 in g3)
        assert is_triangle_orbit(f7, *trip) == oracle


def test_expand_frob7(frob7_design):
    assert frob7_design.triangle_count == 889
    assert verify_design(frob7_design).ok


def test_expand_gdd12(gdd12_6):
    assert gdd12_6.triangle_count == 917280
    assert gdd12_6.m == 6 and len(gdd12_6.groups) == 65


def test_orbit_length_full(f7):
    # one orbit: exactly 2^n - 1 distinct triangles
    cert = OrbitCertificate(n=7, m=1, poly=f7.poly, reps=((1, 9),))
    d = expand_certificate(cert)
    assert d.triangle_count == 127
    assert np.unique(d.tri, axis=0).shape[0] == 127


def test_expand_rejects_degenerate_rep(f7):
    # j = zech(i) makes all three lines share an orbit
    cert = OrbitCertificate(n=7, m=1, poly=f7.poly, reps=((1, 7),))
    with pytest.raises(OrbitCollisionError):
        expand_certificate(cert)


def test_expand_rejects_orbit_collision(f7):
    cert = OrbitCertificate(n=7, m=1, poly=f7.poly, reps=((1, 9), (1, 9)))
    with pytest.raises(OrbitCollisionError):
        expand_certificate(cert)


def test_expand_rejects_group_line(f12):
    # i divisible by 65 puts the first line inside a spread group
    cert = OrbitCertificate(n=12, m=6, poly=f12.poly, reps=((65, 7),))
    with pytest.raises(ValueError, match="group line"):
        expand_certificate(cert)


def test_expand_rejects_bad_dimension_gap():
    cert = OrbitCertificate(n=8, m=1, poly=build_field(8).poly, reps=((1, 5),))
    with pytest.raises(ValueError, match="divisible by 6"):
        expand_certificate(cert)


def test_frobenius_reps_sweep(f7):
    reps = frobenius_reps(f7, [(1, 9)])
    assert len(reps) == 7
    assert reps[0] == (1, 118)  # (a, -b) mod 127
    assert len(set(reps)) == 7


def test_certificate_json_roundtrip():
    cert = as_certificate(load_dataset("gdd12-6"))
    d = cert.to_json_dict()
    back = certificate_from_json_dict(d)
    assert back == cert
    fc = as_certificate(load_dataset("frob7"))
    assert certificate_from_json_dict(fc.to_json_dict()) == fc


def test_gamma_key(f7):
    assert gamma_key(f7, 126) == 1
    assert gamma_key(f7, 9) == min(gamma(f7, 9))


def test_expand_with_groups_flag(f12):
    from tridesign.datasets import as_certificate, load_dataset
    from tridesign.designs import Design, Gdd
    cert = as_certificate(load_dataset("gdd12-6"))
    plain = expand_certificate(cert, with_groups=False)
    assert type(plain) is Design
    assert plain.triangle_count == 917280


def test_expansion_determinism(f7):
    from tridesign.datasets import as_certificate, load_dataset
    cert = as_certificate(load_dataset("frob7"))
    d1 = expand_certificate(cert)
    d2 = expand_certificate(cert)
    assert np.array_equal(d1.tri, d2.tri)


def test_orbit_key_degenerate_line(f6):
    # the line fixed by the order-3 multiplier lives inside the GF(4)
    # subfield; its closure set has size 2
    line = canonical_line(1, f6.exp_table[21])
    key = orbit_key_of_line(f6, line)
    assert key == 21
    assert gamma(f6, key) == (21, 42)
