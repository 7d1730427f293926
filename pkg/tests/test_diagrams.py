import random

import pytest

from relfree.diagrams import (
    ConjugacyClaim,
    DiagramCertificate,
    EqualityClaim,
    PuncturedSphereClaim,
    certify_dehn_trace,
    check_certificate,
    load_certificate,
    random_corruption,
    save_certificate,
)
from relfree.errors import MalformedCertificate, TraceMismatch, Unsupported
from relfree.graded import DehnStep, dehn_reduce_trace
from relfree.words import Alphabet, Word, concat, conjugate, power

AB = Alphabet(2)
COMM = Word.parse(AB, "a1 a2 a1^-1 a2^-1")
AB4 = Alphabet(4)
GENUS2 = Word.parse(AB4, "a1 a2 a1^-1 a2^-1 a3 a4 a3^-1 a4^-1")


def one_face_disk():
    """Face and boundary both read the commutator; sides glued in parallel."""
    labels = {}
    for i, g in enumerate(COMM.to_letters(), start=1):
        labels[i] = g          # face sides 1..4
        labels[i + 4] = g      # boundary sides 5..8
    return DiagramCertificate(
        AB, labels,
        faces=[[1, 2, 3, 4]],
        boundaries=[[5, 6, 7, 8]],
        pairs=[(1, 5), (2, 6), (3, 7), (4, 8)],
        claim=EqualityClaim(COMM))


def zero_face_annulus():
    u = Word.parse(AB, "a1 a2")
    v = Word.parse(AB, "a2 a1")  # a rotation of u
    labels = {1: 1, 2: 2, 3: -1, 4: -2}  # second boundary reads v^-1
    return DiagramCertificate(
        AB, labels,
        faces=[],
        boundaries=[[1, 2], [3, 4]],
        pairs=[(1, 3), (2, 4)],
        claim=ConjugacyClaim(u, v))


def test_one_face_disk_accepts():
    out = check_certificate(one_face_disk(), [COMM])
    assert out.accepted, out.reason


def test_rotation_annulus_accepts():
    out = check_certificate(zero_face_annulus(), [])
    assert out.accepted, out.reason


def test_removed_pairing_breaks_euler():
    cert = zero_face_annulus()
    cert.pairs.pop()
    out = check_certificate(cert, [])
    assert not out.accepted
    assert "Euler" in out.reason


def test_flipped_label_rejected():
    cert = one_face_disk()
    cert.labels[1] = -cert.labels[1]
    assert not check_certificate(cert, [COMM]).accepted


def test_wrong_claim_word_rejected():
    cert = one_face_disk()
    cert.claim = EqualityClaim(Word.parse(AB, "a1 a2"))
    out = check_certificate(cert, [COMM])
    assert not out.accepted
    assert "claim" in out.reason or "boundary" in out.reason


def test_face_must_read_a_relator():
    cert = one_face_disk()
    out = check_certificate(cert, [Word.parse(AB, "a1 a2 a1 a2")])
    assert not out.accepted
    assert "relator" in out.reason


def test_verdict_is_order_independent():
    cert = one_face_disk()
    base = check_certificate(cert, [COMM]).accepted
    # permute the cycle start, the pair list, and the side ids
    cert.faces[0] = cert.faces[0][2:] + cert.faces[0][:2]
    cert.pairs.reverse()
    assert check_certificate(cert, [COMM]).accepted == base

    relabel = {1: 11, 2: 12, 3: 13, 4: 14, 5: 25, 6: 26, 7: 27, 8: 28}
    cert2 = one_face_disk()
    cert2.labels = {relabel[k]: v for k, v in cert2.labels.items()}
    cert2.faces = [[relabel[r] for r in cert2.faces[0]]]
    cert2.boundaries = [[relabel[r] for r in cert2.boundaries[0]]]
    cert2.pairs = [(relabel[s], relabel[t]) for s, t in cert2.pairs]
    assert check_certificate(cert2, [COMM]).accepted == base


def test_malformed_certificates_raise():
    cert = one_face_disk()
    cert.faces[0][0] = 99
    with pytest.raises(MalformedCertificate):
        check_certificate(cert, [COMM])
    cert = one_face_disk()
    cert.faces.append([])
    with pytest.raises(MalformedCertificate):
        check_certificate(cert, [COMM])
    cert = one_face_disk()
    cert.boundaries.append([1])  # side 1 now referenced twice
    with pytest.raises(MalformedCertificate):
        check_certificate(cert, [COMM])


def test_punctured_sphere_three_boundaries():
    # thickened theta graph: three arcs, three boundary circles
    labels = {1: 1, 2: -2, 3: 2, 4: 2, 5: -2, 6: -1}
    cert = DiagramCertificate(
        AB, labels,
        faces=[],
        boundaries=[[1, 2], [3, 4], [5, 6]],
        pairs=[(1, 6), (2, 3), (4, 5)],
        claim=PuncturedSphereClaim((
            Word.parse(AB, "a1 a2^-1"),
            Word.parse(AB, "a2^2"),
            Word.parse(AB, "a2^-1 a1^-1"))))
    out = check_certificate(cert, [])
    assert out.accepted, out.reason


def test_four_boundaries_unsupported():
    labels = {1: 1, 2: -1, 3: 1, 4: -1, 5: 1, 6: -1, 7: 1, 8: -1}
    cert = DiagramCertificate(
        AB, labels,
        faces=[],
        boundaries=[[1], [2], [3], [4], [5], [6], [7], [8]][:4],
        pairs=[(1, 2), (3, 4)],
        claim=PuncturedSphereClaim(tuple(Word.parse(AB, "a1") for _ in range(4))))
    cert.labels = {1: 1, 2: -1, 3: 1, 4: -1}
    with pytest.raises(Unsupported):
        check_certificate(cert, [])


def test_mirror_pair_reported_as_warning():
    # two mirror squares sharing one edge; the claim cannot survive (the raw
    # boundary reading is unreduced) but the reducedness warning must fire
    labels = {1: 1, 2: 2, 3: -1, 4: -2,      # face 1 reads the commutator
              5: -1, 6: 2, 7: 1, 8: -2}      # face 2 reads its mirror
    for i, g in ((9, 2), (10, -1), (11, -2), (12, 2), (13, 1), (14, -2)):
        labels[i] = g
    cert = DiagramCertificate(
        AB, labels,
        faces=[[1, 2, 3, 4], [5, 6, 7, 8]],
        boundaries=[[9, 10, 11, 12, 13, 14]],
        pairs=[(1, 5), (2, 9), (3, 10), (4, 11), (6, 12), (7, 13), (8, 14)],
        claim=EqualityClaim(Word.parse(AB, "a2 a1^-1 a2^-1 a2 a1 a2^-1")))
    out = check_certificate(cert, [COMM])
    assert any("mirror-glued" in w for w in out.warnings)


# -- traces --------------------------------------------------------------------

def test_single_step_trace_round_trip():
    res = dehn_reduce_trace(COMM, [COMM])
    cert = certify_dehn_trace(COMM, [COMM], res.steps)
    assert len(cert.faces) == 1
    assert check_certificate(cert, [COMM]).accepted


def test_multi_step_trace_round_trip():
    w = concat(conjugate(GENUS2, Word.parse(AB4, "a3 a1")), power(GENUS2, -1))
    res = dehn_reduce_trace(w, [GENUS2])
    assert res.word.is_empty
    cert = certify_dehn_trace(w, [GENUS2], res.steps)
    assert len(cert.faces) == len(res.steps) == 2
    assert check_certificate(cert, [GENUS2]).accepted


def test_tampered_trace_rejected():
    w = concat(conjugate(GENUS2, Word.parse(AB4, "a3 a1")), power(GENUS2, -1))
    res = dehn_reduce_trace(w, [GENUS2])
    s0 = res.steps[0]
    for bad in (
        DehnStep(s0.pos + 1, s0.matched, s0.relator_index, s0.sign, s0.offset),
        DehnStep(s0.pos, s0.matched, s0.relator_index, -s0.sign, s0.offset),
        DehnStep(s0.pos, s0.matched, s0.relator_index, s0.sign, (s0.offset + 1) % 8),
    ):
        with pytest.raises(TraceMismatch):
            certify_dehn_trace(w, [GENUS2], [bad] + list(res.steps[1:]))


def test_incomplete_trace_rejected():
    w = concat(conjugate(GENUS2, Word.parse(AB4, "a3 a1")), power(GENUS2, -1))
    res = dehn_reduce_trace(w, [GENUS2])
    with pytest.raises(TraceMismatch):
        certify_dehn_trace(w, [GENUS2], res.steps[:1])


def test_corruptions_always_rejected():
    w = concat(conjugate(GENUS2, Word.parse(AB4, "a3 a1")), power(GENUS2, -1))
    res = dehn_reduce_trace(w, [GENUS2])
    cert = certify_dehn_trace(w, [GENUS2], res.steps)
    rng = random.Random(40)
    for _ in range(50):
        bad = random_corruption(cert, rng)
        try:
            assert not check_certificate(bad, [GENUS2]).accepted
        except (MalformedCertificate, Unsupported):
            pass


# -- files ---------------------------------------------------------------------

def test_certificate_file_round_trip(tmp_path):
    res = dehn_reduce_trace(COMM, [COMM])
    cert = certify_dehn_trace(COMM, [COMM], res.steps)
    path = tmp_path / "cert.txt"
    save_certificate(cert, path)
    loaded = load_certificate(path)
    assert loaded.labels == cert.labels
    assert loaded.faces == cert.faces
    assert loaded.boundaries == cert.boundaries
    assert loaded.pairs == cert.pairs
    assert loaded.claim == cert.claim
    assert check_certificate(loaded, [COMM]).accepted


def test_conjugacy_certificate_file(tmp_path):
    cert = zero_face_annulus()
    path = tmp_path / "annulus.txt"
    save_certificate(cert, path)
    loaded = load_certificate(path)
    assert check_certificate(loaded, []).accepted
