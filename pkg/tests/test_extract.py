import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evidential.belief import Frame, MassFunction, validate_mass
from evidential.extract import (
    BpaSet,
    FrequencyEntry,
    build_frequency_table,
    extract_bpas,
    method1_consonant,
    method2,
    method3,
)
from evidential.records import CaseRecord, EvidenceItemId, ReferenceIntervals, Region

from helpers import frame_of, frequency_vectors

ABC = Frame(("a", "b", "c"))
INTERVALS = ReferenceIntervals({"AALB": (10.0, 20.0)})


def case(cid, outcome, aalb):
    return CaseRecord(cid, outcome, {} if aalb is None else {"AALB": aalb})


class TestFrequencyTable:
    def test_degenerate_distribution(self):
        cases = [case(f"c{i}", "a", 5.0) for i in range(10)]
        table = build_frequency_table(cases, INTERVALS, ABC)
        entry = table.entries[EvidenceItemId("AALB", Region.BELOW)]
        assert entry.freq == (1.0, 0.0, 0.0)
        assert entry.support == 10

    def test_direct_counting(self):
        cases = [
            case("c1", "a", 5.0),
            case("c2", "a", 5.0),
            case("c3", "b", 5.0),
            case("c4", "c", 25.0),
        ]
        table = build_frequency_table(cases, INTERVALS, ABC)
        below = table.entries[EvidenceItemId("AALB", Region.BELOW)]
        assert below.freq == pytest.approx((2 / 3, 1 / 3, 0.0))
        assert below.support == 3
        above = table.entries[EvidenceItemId("AALB", Region.ABOVE)]
        assert above.freq == (0.0, 0.0, 1.0)
        assert above.support == 1

    def test_missing_value_contributes_nothing(self):
        cases = [case("c1", "a", 5.0), case("c2", "a", None)]
        table = build_frequency_table(cases, INTERVALS, ABC)
        assert table.entries[EvidenceItemId("AALB", Region.BELOW)].support == 1

    def test_unknown_outcome(self):
        with pytest.raises(ValueError, match="unknown outcome"):
            build_frequency_table([case("c1", "z", 5.0)], INTERVALS, ABC)

    def test_parameter_without_interval(self):
        bad = CaseRecord("c1", "a", {"XYZ": 1.0})
        with pytest.raises(ValueError, match="no reference interval"):
            build_frequency_table([bad], INTERVALS, ABC)

    def test_entry_rejects_empty(self):
        with pytest.raises(ValueError):
            FrequencyEntry((0, 0, 0))


class TestMethod1:
    def test_canonical(self):
        m = method1_consonant(ABC, (0.5, 0.3, 0.2))
        assert m.mass(0b001) == pytest.approx(0.4, abs=1e-12)
        assert m.mass(0b011) == pytest.approx(0.2, abs=1e-12)
        assert m.mass(0b111) == pytest.approx(0.4, abs=1e-12)

    def test_uniform_is_vacuous(self):
        m = method1_consonant(ABC, (1 / 3, 1 / 3, 1 / 3))
        assert dict(m.items()) == {0b111: 1.0}

    def test_perfect_discriminator(self):
        m = method1_consonant(ABC, (1.0, 0.0, 0.0))
        assert dict(m.items()) == {0b001: 1.0}

    def test_zero_frequency_outcomes_excluded(self):
        m = method1_consonant(ABC, (0.5, 0.5, 0.0))
        assert dict(m.items()) == {0b011: pytest.approx(1.0)}
        assert m.plausibility(0b100) == 0.0

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError, match="no positive"):
            method1_consonant(ABC, (0.0, 0.0, 0.0))

    def test_scale_invariant(self):
        a = method1_consonant(ABC, (5, 3, 2))
        b = method1_consonant(ABC, (0.5, 0.3, 0.2))
        for mask in a.focal:
            assert a.mass(mask) == pytest.approx(b.mass(mask), abs=1e-12)


@settings(max_examples=300)
@given(frequency_vectors())
def test_method1_properties(nf):
    n, freq = nf
    frame = frame_of(n)
    m = method1_consonant(frame, freq)
    validate_mass(m)
    assert m.is_consonant()
    top = max(freq)
    for i, f in enumerate(freq):
        assert m.plausibility(1 << i) == pytest.approx(f / top, abs=1e-12)


class TestMethod2:
    def test_dominant_singleton(self):
        m_comp = method2(ABC, (0.6, 0.3, 0.1), "complement")
        assert dict(m_comp.items()) == {
            0b001: pytest.approx(0.6),
            0b110: pytest.approx(0.4),
        }
        m_theta = method2(ABC, (0.6, 0.3, 0.1), "theta")
        assert dict(m_theta.items()) == {
            0b001: pytest.approx(0.6),
            0b111: pytest.approx(0.4),
        }

    def test_accumulation_branch(self):
        m = method2(ABC, (0.4, 0.35, 0.25), "complement")
        assert m.mass(0b011) == pytest.approx(0.75, abs=1e-12)
        assert m.mass(0b100) == pytest.approx(0.25, abs=1e-12)

    def test_certain_singleton_both_variants(self):
        for remainder in ("complement", "theta"):
            m = method2(ABC, (1.0, 0.0, 0.0), remainder)
            assert dict(m.items()) == {0b001: 1.0}

    def test_tie_absorption(self):
        frame = frame_of(4)
        m = method2(frame, (0.3, 0.3, 0.3, 0.1), "complement")
        assert m.mass(0b0111) == pytest.approx(0.9, abs=1e-12)
        assert m.mass(0b1000) == pytest.approx(0.1, abs=1e-12)

    def test_remainder_validation(self):
        with pytest.raises(ValueError, match="remainder"):
            method2(ABC, (0.6, 0.3, 0.1), "nowhere")

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError, match="no positive"):
            method2(ABC, (0, 0, 0), "theta")


@settings(max_examples=300)
@given(frequency_vectors(), st.sampled_from(["complement", "theta"]))
def test_method2_structure(nf, remainder):
    n, freq = nf
    frame = frame_of(n)
    m = method2(frame, freq, remainder)
    validate_mass(m)
    assert len(m) <= 3

    order = sorted(range(n), key=lambda i: (-freq[i], i))
    top = freq[order[0]]
    # re-derive the expected primary focus independently (cumsum + tie sweep)
    if top > 0.5:
        cut = 1
    else:
        running = 0.0
        cut = 0
        while running <= 0.5:
            running += freq[order[cut]]
            cut += 1
        last = freq[order[cut - 1]]
        while cut < n and freq[order[cut]] == last:
            cut += 1
    b_mask = 0
    for i in order[:cut]:
        b_mask |= 1 << i
    b_val = sum(freq[i] for i in order[:cut])
    assert m.mass(b_mask) == pytest.approx(b_val, abs=1e-9)
    if top > 0.5:
        assert b_mask == 1 << order[0]
    else:
        assert m.mass(b_mask) > 0.5

    rest = [i for i in order[cut:] if freq[i] > 0]
    if remainder == "theta":
        for mask in m.focal:
            assert mask in (b_mask, frame.full_mask)
        if b_mask != frame.full_mask and b_val < 1.0:
            assert m.mass(frame.full_mask) == pytest.approx(1.0 - b_val, abs=1e-9)
    else:
        c_mask = 0
        for i in rest:
            c_mask |= 1 << i
        if c_mask:
            assert m.mass(c_mask) == pytest.approx(sum(freq[i] for i in rest), abs=1e-9)
        else:
            assert dict(m.items()) == {b_mask: pytest.approx(1.0)}


@settings(max_examples=200)
@given(frequency_vectors(max_n=6))
def test_method2b_simple_support_when_b_singleton(nf):
    n, freq = nf
    frame = frame_of(n)
    m = method2(frame, freq, "theta")
    singleton_foci = [mask for mask in m.focal if mask.bit_count() == 1]
    if singleton_foci and len(m) == 2:
        assert set(m.focal) == {singleton_foci[0], frame.full_mask}


class TestMethod3:
    def test_global_theta_one(self):
        frame = Frame(("a", "b"))
        m = method3(frame, (0.75, 0.25), "global", "one")
        assert m.mass(0b01) == pytest.approx(0.375, abs=1e-12)
        assert m.mass(0b10) == pytest.approx(0.125, abs=1e-12)
        assert m.mass(0b11) == pytest.approx(0.5, abs=1e-12)

    def test_global_theta_zero_drops_zero_raws(self):
        frame = Frame(("a", "b"))
        m = method3(frame, (1.0, 0.0), "global", "zero")
        assert dict(m.items()) == {0b01: pytest.approx(1.0)}

    def test_size_strata_share_equally(self):
        frame = frame_of(4)
        m = method3(frame, (0.4, 0.3, 0.2, 0.1), "size", "one")
        by_size = {}
        for mask, value in m.items():
            by_size[mask.bit_count()] = by_size.get(mask.bit_count(), 0.0) + value
        shares = list(by_size.values())
        assert all(s == pytest.approx(shares[0], abs=1e-9) for s in shares)

    def test_singleton_ratio_preservation(self):
        frame = frame_of(3)
        m = method3(frame, (0.5, 0.3, 0.2), "global", "one")
        assert m.mass(0b001) / m.mass(0b010) == pytest.approx(0.5 / 0.3, abs=1e-9)
        assert m.mass(0b001) / m.mass(0b100) == pytest.approx(0.5 / 0.2, abs=1e-9)

    def test_singleton_frame_theta_zero_impossible(self):
        frame = Frame(("a",))
        with pytest.raises(ValueError, match="scored zero"):
            method3(frame, (1.0,), "global", "zero")

    def test_variant_validation(self):
        with pytest.raises(ValueError, match="norm"):
            method3(ABC, (0.5, 0.3, 0.2), "sideways", "one")
        with pytest.raises(ValueError, match="theta"):
            method3(ABC, (0.5, 0.3, 0.2), "global", "two")


@settings(max_examples=100)
@given(frequency_vectors(max_n=6), st.sampled_from(["global", "size"]),
       st.sampled_from(["one", "zero"]))
def test_method3_always_valid(nf, norm, theta):
    n, freq = nf
    m = method3(frame_of(n), freq, norm, theta)
    validate_mass(m)


@settings(max_examples=150)
@given(frequency_vectors(max_n=6), st.permutations(range(6)), st.sampled_from(["1", "2a", "2b", "3"]))
def test_permutation_equivariance(nf, perm, method):
    n, freq = nf
    frame = frame_of(n)
    perm = [p for p in perm if p < n]
    shuffled_labels = tuple(frame.labels[p] for p in perm)
    shuffled_frame = Frame(shuffled_labels)
    shuffled_freq = [freq[p] for p in perm]

    def run(fr, fv):
        if method == "1":
            return method1_consonant(fr, fv)
        if method == "2a":
            return method2(fr, fv, "complement")
        if method == "2b":
            return method2(fr, fv, "theta")
        return method3(fr, fv)

    base = run(frame, freq)
    shuffled = run(shuffled_frame, shuffled_freq)
    for mask, value in base.items():
        relabeled = shuffled_frame.mask_of(frame.labels_of(mask))
        assert shuffled.mass(relabeled) == pytest.approx(value, abs=1e-9)


class TestExtractBpas:
    def build_table(self):
        cases = [
            case("c1", "a", 5.0),
            case("c2", "a", 5.0),
            case("c3", "b", 5.0),
            case("c4", "c", 25.0),
        ]
        return build_frequency_table(cases, INTERVALS, ABC)

    def test_dispatch(self):
        table = self.build_table()
        for method in ("1", "2a", "2b", "3"):
            bpa = extract_bpas(table, method)
            assert bpa.method == method
            assert set(bpa.entries) == set(table.entries)
            for m in bpa.entries.values():
                validate_mass(m)

    def test_min_support_floor(self):
        table = self.build_table()
        bpa = extract_bpas(table, "2a", min_support=2)
        assert EvidenceItemId("AALB", Region.ABOVE) not in bpa.entries
        assert EvidenceItemId("AALB", Region.BELOW) in bpa.entries

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="method"):
            extract_bpas(self.build_table(), "4")

    def test_round_trip(self):
        bpa = extract_bpas(self.build_table(), "3")
        assert BpaSet.from_dict(bpa.to_dict()) == bpa

    def test_json_uses_class_key(self):
        doc = extract_bpas(self.build_table(), "2b").to_dict()
        assert doc["method"] == "2b"
        assert all("class" in item and "parameter" in item for item in doc["items"])
