"""Integer datapath: input split, basis numerators, MAC, end-to-end words."""

from fractions import Fraction

import numpy as np
import pytest

from crtanh import kernels
from crtanh.datapath import (
    ACC_SCALE_BITS,
    BASIS_SCALE_BITS,
    BasisFixed,
    DatapathConfig,
    build_basis_rom,
    mac_dot,
    split_input,
    t_vector_compute,
    tanh_eval_fixed,
)
from crtanh.qformat import Q2_13, FixedWord, QFormat, RoundingMode, negate_saturating
from crtanh.spline import build_control_table, tanh_ref


def basis_fraction_oracle(u: int) -> tuple[int, int, int, int]:
    """Exact rational basis weights at t = u/1024, scaled by 2**31."""
    t = Fraction(u, 1024)
    weights = (
        (-(t**3) + 2 * t**2 - t) / 2,
        (3 * t**3 - 5 * t**2 + 2) / 2,
        (-3 * t**3 + 4 * t**2 + t) / 2,
        (t**3 - t**2) / 2,
    )
    scaled = [w * (1 << 31) for w in weights]
    assert all(s.denominator == 1 for s in scaled)
    return tuple(int(s) for s in scaled)


class TestDatapathConfig:
    def test_defaults(self):
        cfg = DatapathConfig()
        assert cfg.period == 0.125
        assert cfg.n_segments == 32
        assert cfg.rounding is RoundingMode.NEAREST_EVEN
        assert cfg.t_strategy == "computed"

    def test_scale_constants(self):
        assert BASIS_SCALE_BITS == 31
        assert ACC_SCALE_BITS == 44

    def test_rejects_other_periods(self):
        with pytest.raises(ValueError):
            DatapathConfig(period=0.25)
        with pytest.raises(ValueError):
            DatapathConfig(period=0.0625)

    def test_rejects_other_splits(self):
        with pytest.raises(ValueError):
            DatapathConfig(index_bits=4, t_bits=11)

    def test_rejects_other_formats(self):
        with pytest.raises(ValueError):
            DatapathConfig(fmt=QFormat(total_bits=16, frac_bits=12))

    def test_rejects_unknown_strategy(self):
        with pytest.raises(ValueError):
            DatapathConfig(t_strategy="hybrid")


class TestSplitInput:
    def test_known_splits(self):
        assert split_input(FixedWord(8192)) == (False, 8, 0)
        assert split_input(FixedWord(512)) == (False, 0, 512)
        assert split_input(FixedWord(-8192)) == (True, 8, 0)
        assert split_input(FixedWord(32767)) == (False, 31, 1023)
        assert split_input(FixedWord(0)) == (False, 0, 0)

    def test_minimum_word_saturates(self):
        # |-32768| does not fit, so the magnitude clamps to 32767
        assert split_input(FixedWord(-32768)) == (True, 31, 1023)

    def test_reconstruction(self):
        rng = np.random.default_rng(9)
        for raw in rng.integers(-32767, 32768, size=500).tolist():
            neg, k, u = split_input(FixedWord(raw))
            assert (k << 10) + u == abs(raw)
            assert neg == (raw < 0)


class TestTVector:
    def test_endpoints(self):
        assert t_vector_compute(0) == BasisFixed(0, 1 << 31, 0, 0)

    def test_midpoint(self):
        assert t_vector_compute(512) == BasisFixed(
            -(1 << 27), 9 << 27, 9 << 27, -(1 << 27)
        )

    def test_partition_of_unity_exhaustive(self):
        for u in range(1024):
            assert sum(t_vector_compute(u)) == 1 << 31

    def test_matches_rational_oracle_exhaustive(self):
        for u in range(1024):
            assert tuple(t_vector_compute(u)) == basis_fraction_oracle(u)

    def test_width_bound_exhaustive(self):
        # numerators fit 33 signed bits, the n_0 value at u = 0 hits the edge
        widest = 0
        for u in range(1024):
            widest = max(widest, max(abs(n) for n in t_vector_compute(u)))
        assert widest == 1 << 31

    def test_domain_check(self):
        with pytest.raises(ValueError):
            t_vector_compute(-1)
        with pytest.raises(ValueError):
            t_vector_compute(1024)


class TestBasisRom:
    def test_shape_and_contents(self, basis_rom):
        assert basis_rom.rows.shape == (1024, 4)
        assert basis_rom.row(512) == t_vector_compute(512)
        assert basis_rom.row(0) == t_vector_compute(0)

    def test_rows_are_frozen(self, basis_rom):
        assert not basis_rom.rows.flags.writeable

    def test_domain_check(self, basis_rom):
        with pytest.raises(ValueError):
            basis_rom.row(1024)


class TestMacDot:
    def test_zero_quad(self):
        assert mac_dot((0, 0, 0, 0), t_vector_compute(700)) == 0

    def test_u_zero_selects_p0(self):
        assert mac_dot((-5, 1234, 77, -3), t_vector_compute(0)) == 1234 << 31

    def test_first_segment_midpoint(self, flagship_q):
        # (-1019, 0, 1019, 2006) at u = 512: an exact half-way accumulator
        acc = mac_dot(flagship_q.neighbor_raw(0), t_vector_compute(512))
        assert acc == 1098437885952
        assert acc == 1023 << 30

    def test_matches_rational_oracle(self, flagship_q):
        rng = np.random.default_rng(10)
        for _ in range(100):
            k = int(rng.integers(0, 32))
            u = int(rng.integers(0, 1024))
            quad = flagship_q.neighbor_raw(k)
            oracle = sum(p * n for p, n in zip(quad, basis_fraction_oracle(u)))
            assert mac_dot(quad, t_vector_compute(u)) == oracle


class TestTanhEvalFixed:
    def test_known_words(self, flagship_q):
        cfg = DatapathConfig()
        assert tanh_eval_fixed(FixedWord(0), cfg, flagship_q).raw == 0
        assert tanh_eval_fixed(FixedWord(0x2000), cfg, flagship_q).raw == 0x185F
        assert tanh_eval_fixed(FixedWord(-8192), cfg, flagship_q).raw == -6239
        assert tanh_eval_fixed(FixedWord(32767), cfg, flagship_q).raw == 8187

    def test_minimum_word_follows_saturating_negate(self, flagship_q):
        cfg = DatapathConfig()
        top = tanh_eval_fixed(FixedWord(32767), cfg, flagship_q)
        bottom = tanh_eval_fixed(FixedWord(-32768), cfg, flagship_q)
        assert bottom.raw == negate_saturating(top).raw == -8187

    def test_tie_rounding_at_raw_512(self, flagship_q):
        # acc is exactly 511.5 * 2**31 there, so the modes split
        for mode, expected in (
            (RoundingMode.NEAREST_EVEN, 512),
            (RoundingMode.NEAREST_AWAY, 512),
            (RoundingMode.TRUNCATE, 511),
        ):
            cfg = DatapathConfig(rounding=mode)
            assert tanh_eval_fixed(FixedWord(512), cfg, flagship_q).raw == expected

    def test_error_within_three_ulp(self, flagship_q):
        cfg = DatapathConfig()
        rng = np.random.default_rng(12)
        for raw in rng.integers(-32768, 32768, size=400).tolist():
            out = tanh_eval_fixed(FixedWord(raw), cfg, flagship_q)
            assert abs(out.value - tanh_ref(FixedWord(raw).value)) <= 3 * Q2_13.ulp

    def test_rom_strategy_matches_computed(self, flagship_q, basis_rom):
        c_cfg = DatapathConfig(t_strategy="computed")
        r_cfg = DatapathConfig(t_strategy="rom")
        rng = np.random.default_rng(13)
        for raw in rng.integers(-32768, 32768, size=300).tolist():
            a = tanh_eval_fixed(FixedWord(raw), c_cfg, flagship_q)
            b = tanh_eval_fixed(FixedWord(raw), r_cfg, flagship_q, basis_rom)
            assert a.raw == b.raw

    def test_rom_strategy_requires_rom(self, flagship_q):
        cfg = DatapathConfig(t_strategy="rom")
        with pytest.raises(ValueError):
            tanh_eval_fixed(FixedWord(100), cfg, flagship_q)

    def test_requires_quantized_matching_table(self, flagship_real):
        cfg = DatapathConfig()
        with pytest.raises(ValueError):
            tanh_eval_fixed(FixedWord(100), cfg, flagship_real)
        other = build_control_table(0.25, quantized=True)
        with pytest.raises(ValueError):
            tanh_eval_fixed(FixedWord(100), cfg, other)

    def test_requires_table(self):
        with pytest.raises(ValueError):
            tanh_eval_fixed(FixedWord(100))

    def test_matches_batch_kernel_exhaustive(self, flagship_q, all_raws):
        cfg = DatapathConfig()
        out, _ = kernels.fixed_eval_batch(all_raws, flagship_q.raw)
        rng = np.random.default_rng(14)
        idx = rng.integers(0, len(all_raws), size=300)
        for i in idx.tolist():
            word = tanh_eval_fixed(FixedWord(int(all_raws[i])), cfg, flagship_q)
            assert word.raw == int(out[i])


class TestDatapathInvariants:
    def test_consistency_with_real_model(self, flagship_q, all_raws):
        # the integer pipeline is the real spline over decoded entries plus
        # one final rounding, so they can never differ by more than half ulp
        out, _ = kernels.fixed_eval_batch(all_raws, flagship_q.raw)
        real = kernels.cr_eval_batch(
            all_raws / 8192.0, flagship_q.values, 0.125, 4.0
        )
        gap = np.abs(out / 8192.0 - real)
        assert gap.max() <= 2.0**-14

    def test_accumulator_bound_exhaustive(self, flagship_q, all_raws):
        _, acc = kernels.fixed_eval_batch(all_raws, flagship_q.raw)
        peak = int(np.abs(acc).max())
        assert peak < 1 << 47  # 48-bit signed accumulator never overflows
        assert peak > 1 << 43  # and the bound is tight, not vacuous

    def test_outputs_stay_inside_open_unit_interval(self, flagship_q, all_raws):
        out, _ = kernels.fixed_eval_batch(all_raws, flagship_q.raw)
        assert int(np.abs(out).max()) < 8192
