"""Reserved-tone sensing, subtraction, reliability ranking, ZF noise
cancellation, and MRC combining."""

import numpy as np
import pytest

from nbisim import (
    CompactCovariance,
    DegenerateSupportError,
    SabmpParams,
    Sparsifier,
    SystemConfig,
    ToneSets,
    build_augmented_system,
    build_equalizer,
    build_reserved_system,
    choose_reserved,
    demodulate_hard,
    dft_matrix,
    distance_reliability,
    draw_channel,
    equalize,
    hard_decision,
    make_frame,
    measurement_noise_variance,
    mrc_combine,
    nbi_frequency_estimate,
    qam_constellation,
    rank_carriers,
    recover_and_subtract,
    reliability_metric,
    residual_variances,
    select_reliable,
    synthesize_nbi,
    transmit_receive,
    user_comb,
    zf_noise_cancellation,
)
from nbisim.nbi import NbiSource
from nbisim.pipeline import SensingSystem

CFG = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.01)


def channel_without_nulls(config, rng, floor=0.25):
    while True:
        ch = draw_channel(config, rng)
        if np.abs(ch.freq_response).min() > floor:
            return ch


def one_frame_chain(rng, config=CFG, reserved=None, nbi=None, noise=False, kind="zf"):
    """Frame for user 0 plus an interferer frame, through channel and equalizer."""
    frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
    channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
    noise_rng = np.random.default_rng(rng.integers(2**32)) if noise else None
    y = transmit_receive(frames, channels, config, nbi=nbi, noise_rng=noise_rng)
    eq = build_equalizer(kind, channels[0], config, u=0)
    return frames[0], channels[0], eq, equalize(eq, y)


class TestChooseReserved:
    def test_deterministic(self):
        assert np.array_equal(choose_reserved(16, 4, 7), choose_reserved(16, 4, 7))

    def test_near_full_complement(self):
        t = choose_reserved(8, 7, 0)
        assert t.size == 7 and np.unique(t).size == 7
        assert np.setdiff1d(np.arange(8), t).size == 1

    def test_count_validation(self):
        with pytest.raises(ValueError, match="reserved count"):
            choose_reserved(8, 0, 0)
        with pytest.raises(ValueError, match="reserved count"):
            choose_reserved(8, 8, 0)

    def test_inclusion_frequency_uniform(self):
        p, count, runs = 16, 4, 4000
        hits = np.zeros(p)
        for seed in range(runs):
            hits[choose_reserved(p, count, seed)] += 1
        freq = hits / runs
        sigma = np.sqrt((count / p) * (1 - count / p) / runs)
        assert np.abs(freq - count / p).max() < 3.5 * sigma


class TestBuildReservedSystem:
    def test_quiet_band_gives_zero_measurements(self):
        rng = np.random.default_rng(40)
        reserved = choose_reserved(CFG.per_user, 4, 1)
        _, _, eq, x_hat = one_frame_chain(rng, reserved=reserved)
        system = build_reserved_system(
            x_hat, eq, reserved, Sparsifier.create("none", CFG.n_subcarriers)
        )
        assert np.abs(system.measurements).max() < 1e-10

    def test_column_reduction_only_without_sparsifier(self):
        rng = np.random.default_rng(41)
        reserved = choose_reserved(CFG.per_user, 4, 2)
        _, _, eq, x_hat = one_frame_chain(rng, reserved=reserved)
        none_sys = build_reserved_system(
            x_hat, eq, reserved, Sparsifier.create("none", CFG.n_subcarriers)
        )
        assert none_sys.psi.shape == (4, CFG.per_user)
        assert np.array_equal(none_sys.column_map, user_comb(0, CFG))
        for kind in ("window", "haar"):
            full = build_reserved_system(
                x_hat, eq, reserved, Sparsifier.create(kind, CFG.n_subcarriers)
            )
            assert full.psi.shape == (4, CFG.n_subcarriers)

    @pytest.mark.parametrize("kind", ["none", "window", "haar"])
    def test_forward_model_reassembly_zf(self, kind):
        """Measurements must equal Psi s_true + equalized noise exactly."""
        rng = np.random.default_rng(42)
        config = CFG
        reserved = choose_reserved(config.per_user, 5, 3)
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
        nbi = synthesize_nbi([NbiSource(7.3, 2.0 - 1j), NbiSource(20.0, 1.5)], 32)
        noise_rng = np.random.default_rng(777)
        y = transmit_receive(frames, channels, config, nbi=nbi, noise_rng=noise_rng)
        z = y - transmit_receive(frames, channels, config, nbi=nbi)
        eq = build_equalizer("zf", channels[0], config, u=0)
        sp = Sparsifier.create(kind, 32)
        system = build_reserved_system(equalize(eq, y), eq, reserved, sp)
        s_true = nbi[system.column_map] if kind == "none" else sp.forward(nbi)
        expected = system.psi @ s_true + (eq.matrix @ z)[reserved]
        assert np.abs(system.measurements - expected).max() < 1e-10

    def test_forward_model_reassembly_mmse_with_leakage(self):
        rng = np.random.default_rng(43)
        config = CFG
        reserved = choose_reserved(config.per_user, 5, 4)
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
        nbi = synthesize_nbi([NbiSource(5.0, 3.0)], 32)
        noise_rng = np.random.default_rng(778)
        y = transmit_receive(frames, channels, config, nbi=nbi, noise_rng=noise_rng)
        y_data = transmit_receive(frames, channels, config)
        z = y - transmit_receive(frames, channels, config, nbi=nbi)
        eq = build_equalizer("mmse", channels[0], config, u=0)
        system = build_reserved_system(
            equalize(eq, y), eq, reserved, Sparsifier.create("none", 32)
        )
        leak = (eq.matrix @ y_data)[reserved]
        expected = system.psi @ nbi[system.column_map] + (eq.matrix @ z)[reserved] + leak
        assert np.abs(system.measurements - expected).max() < 1e-10
        assert np.abs(leak).max() > 1e-6

    def test_dimension_checks(self):
        rng = np.random.default_rng(44)
        _, _, eq, x_hat = one_frame_chain(rng)
        with pytest.raises(ValueError, match="sparsifier size"):
            build_reserved_system(x_hat, eq, np.array([0]), Sparsifier.create("none", 16))
        with pytest.raises(ValueError, match="equalized values"):
            build_reserved_system(x_hat[:-1], eq, np.array([0]), Sparsifier.create("none", 32))
        with pytest.raises(ValueError, match="outside"):
            build_reserved_system(x_hat, eq, np.array([16]), Sparsifier.create("none", 32))


class TestRecoverAndSubtract:
    def params(self):
        return SabmpParams(lam=0.08, noise_var=1e-6, t_max=4)

    def test_quiet_band_is_untouched(self):
        rng = np.random.default_rng(45)
        reserved = choose_reserved(CFG.per_user, 4, 5)
        _, _, eq, x_hat = one_frame_chain(rng, reserved=reserved)
        system = build_reserved_system(
            x_hat, eq, reserved, Sparsifier.create("none", 32)
        )
        cleaned, est = recover_and_subtract(system, self.params(), x_hat)
        assert np.abs(cleaned - x_hat).max() < 1e-9

    @pytest.mark.parametrize("kind", ["none", "haar"])
    def test_single_source_noiseless_exact_bits(self, kind):
        rng = np.random.default_rng(46)
        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.0)
        reserved = choose_reserved(config.per_user, 4, 6)
        comb = user_comb(0, config)
        nbi = synthesize_nbi([NbiSource(float(comb[9]), 4.0 - 3.0j)], 32)
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
        y = transmit_receive(frames, channels, config, nbi=nbi)
        eq = build_equalizer("zf", channels[0], config, u=0)
        x_hat = equalize(eq, y)
        data_mask = np.setdiff1d(np.arange(config.per_user), reserved)
        raw_bits = demodulate_hard(x_hat, 4, config.symbol_var)[1]
        assert np.any(
            raw_bits.reshape(config.per_user, -1)[data_mask]
            != frames[0].bits.reshape(config.per_user, -1)[data_mask]
        )
        system = build_reserved_system(x_hat, eq, reserved, Sparsifier.create(kind, 32))
        cleaned, _ = recover_and_subtract(system, self.params(), x_hat)
        bits = demodulate_hard(cleaned, 4, config.symbol_var)[1]
        data = np.setdiff1d(np.arange(config.per_user), reserved)
        got = bits.reshape(config.per_user, -1)[data]
        want = frames[0].bits.reshape(config.per_user, -1)[data]
        assert np.array_equal(got, want)

    def test_subtraction_consistent_with_frequency_estimate(self):
        rng = np.random.default_rng(47)
        reserved = choose_reserved(CFG.per_user, 6, 7)
        nbi = synthesize_nbi([NbiSource(4.4, 2.0)], 32)
        _, _, eq, x_hat = one_frame_chain(rng, reserved=reserved, nbi=nbi, noise=True)
        for kind in ("none", "window", "haar"):
            system = build_reserved_system(
                x_hat, eq, reserved, Sparsifier.create(kind, 32)
            )
            cleaned, est = recover_and_subtract(system, self.params(), x_hat)
            i_freq = nbi_frequency_estimate(system, est)
            assert np.abs((x_hat - eq.matrix @ i_freq) - cleaned).max() < 1e-10

    def test_solver_errors_propagate(self):
        sp = Sparsifier.create("none", 32)
        system = SensingSystem(
            measurements=np.ones(6, dtype=complex),
            psi=np.zeros((6, 16), dtype=complex),
            psi_full=np.zeros((16, 16), dtype=complex),
            column_map=user_comb(0, CFG),
            sparsifier=sp,
            n_reserved=6,
        )
        with pytest.raises(DegenerateSupportError):
            recover_and_subtract(system, self.params(), np.zeros(16, dtype=complex))


class TestResidualVariances:
    def _system(self, kind="window"):
        rng = np.random.default_rng(48)
        reserved = choose_reserved(CFG.per_user, 4, 8)
        _, _, eq, x_hat = one_frame_chain(rng, reserved=reserved)
        return build_reserved_system(x_hat, eq, reserved, Sparsifier.create(kind, 32)), eq

    def test_zero_covariance(self):
        system, _ = self._system()
        cov = CompactCovariance(
            indices=np.array([1, 5]), block=np.zeros((2, 2), dtype=complex), n=32
        )
        assert np.abs(residual_variances(cov, system)).max() == 0.0

    def test_isotropic_with_orthonormal_rows(self):
        sp = Sparsifier.create("none", 32)
        f = dft_matrix(16)
        system = SensingSystem(
            measurements=np.zeros(2, dtype=complex),
            psi=f[:2],
            psi_full=f,
            column_map=user_comb(0, CFG),
            sparsifier=sp,
            n_reserved=2,
        )
        cov = CompactCovariance(
            indices=np.arange(16), block=0.3 * np.eye(16, dtype=complex), n=16
        )
        assert np.abs(residual_variances(cov, system) - 0.3).max() < 1e-12

    def test_dense_matrix_oracle(self):
        system, eq = self._system("window")
        rng = np.random.default_rng(49)
        idx = np.sort(rng.choice(32, size=3, replace=False))
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        block = a @ a.conj().T
        cov = CompactCovariance(indices=idx, block=block, n=32)
        hinv = Sparsifier.create("window", 32).inverse_matrix()
        r_freq = hinv[:, idx] @ block @ hinv[:, idx].conj().T
        expected = np.diag(eq.matrix @ r_freq @ eq.matrix.conj().T).real
        got = residual_variances(cov, system)
        assert np.abs(got - expected).max() < 1e-10
        assert got.min() >= 0.0


class TestReliabilityMetric:
    def test_on_point_is_argmax(self):
        # displacements toward other points lower the decision confidence
        c = qam_constellation(4, 2.0)
        values = np.array(
            [c[2], c[2] + 0.4 * (c[0] - c[2]), c[2] + 0.2 * (c[3] - c[2])]
        )
        r = reliability_metric(values, 0.4, c)
        assert np.argmax(r) == 0

    def test_flat_noise_limit(self):
        c = qam_constellation(16, 1.0)
        r = reliability_metric(0.05 + 0.02j, 1e9, c)
        assert r == pytest.approx(1.0 / 15.0, rel=1e-3)

    def test_boundary_midpoint_closed_form(self):
        # QPSK at (0, 1j): two nearest points tie at distance 1, the two
        # far points sit at sqrt(5); sigma_d^2 = 0.5
        c = qam_constellation(4, 2.0)
        r = reliability_metric(1j, 0.5, c)
        expected = np.exp(-2.0) / (np.exp(-2.0) + 2 * np.exp(-10.0))
        assert r == pytest.approx(expected, rel=1e-9)

    def test_monotone_when_approaching_from_inside(self):
        c = qam_constellation(4, 2.0)
        steps = [c[0] * (1.0 - t) for t in (0.8, 0.5, 0.2, 0.05)]
        r = reliability_metric(np.array(steps), 0.3, c)
        assert np.all(np.diff(r) > 0)

    def test_zero_variance_clamped(self):
        c = qam_constellation(4, 2.0)
        r = reliability_metric(c[1], 0.0, c)
        assert np.isfinite(r) and r > 1e300


class TestDistanceReliability:
    def test_on_point_capped(self):
        c = qam_constellation(4, 2.0)
        assert distance_reliability(c[3], c) == pytest.approx(1e3)

    def test_midpoint_is_zero(self):
        c = qam_constellation(4, 2.0)
        assert distance_reliability(1j, c) == pytest.approx(0.0, abs=1e-12)

    def test_farther_next_nearest_is_more_reliable(self):
        c = np.array([0.0, 1.0, 5.0], dtype=complex)
        near_pair = distance_reliability(0.3 + 0j, c)
        lone_pair = distance_reliability(4.7 + 0j, c)
        assert lone_pair > near_pair
        assert near_pair == pytest.approx(-np.log(0.3 / 0.7), rel=1e-9)

    def test_nonnegative(self):
        c = qam_constellation(16, 1.0)
        rng = np.random.default_rng(50)
        v = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        assert distance_reliability(v, c).min() >= 0.0


class TestSelectReliable:
    def test_top_k_with_ties_to_lowest_index(self):
        rel = np.array([5.0, 5.0, 3.0, 9.0])
        chosen = select_reliable(rel, reserved=np.array([3]), count=2)
        assert chosen.tolist() == [0, 1]

    def test_count_validation(self):
        with pytest.raises(ValueError, match="cannot pick"):
            select_reliable(np.ones(4), np.array([0]), 4)

    def test_rank_carriers_both_metrics(self):
        c = qam_constellation(4, 2.0)
        rng = np.random.default_rng(51)
        cleaned = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        sig = np.full(16, 0.2)
        reserved = np.array([0, 1])
        for metric in ("probabilistic", "distance"):
            table = rank_carriers(cleaned, sig, c, reserved, 4, metric)
            assert table.reliable.size == 4
            assert not np.intersect1d(table.reliable, reserved).size
        with pytest.raises(ValueError, match="unknown reliability"):
            rank_carriers(cleaned, sig, c, reserved, 4, "other")


class TestAugmentedSystem:
    def _stage1(self, rng, config, reserved, nbi):
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
        y = transmit_receive(frames, channels, config, nbi=nbi)
        eq = build_equalizer("zf", channels[0], config, u=0)
        x_hat = equalize(eq, y)
        sp = Sparsifier.create("none", config.n_subcarriers)
        system = build_reserved_system(x_hat, eq, reserved, sp)
        cleaned, est = recover_and_subtract(
            system, SabmpParams(lam=0.08, noise_var=1e-6, t_max=4), x_hat
        )
        return frames[0], eq, sp, system, x_hat, cleaned

    def test_empty_reliable_set_reproduces_stage1(self):
        rng = np.random.default_rng(52)
        reserved = choose_reserved(CFG.per_user, 4, 9)
        nbi = synthesize_nbi([NbiSource(6.0, 2.0)], 32)
        _, eq, sp, system, x_hat, cleaned = self._stage1(rng, CFG, reserved, nbi)
        aug = build_augmented_system(
            x_hat, cleaned, eq, ToneSets(reserved, np.array([], dtype=int)), sp, CFG
        )
        assert np.array_equal(aug.measurements, system.measurements)
        assert np.array_equal(aug.psi, system.psi)

    def test_correct_decisions_noiseless_rows_exact(self):
        rng = np.random.default_rng(53)
        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.0)
        reserved = choose_reserved(config.per_user, 4, 10)
        comb = user_comb(0, config)
        nbi = synthesize_nbi([NbiSource(float(comb[3]), 3.0 + 1j)], 32)
        frame, eq, sp, system, x_hat, cleaned = self._stage1(rng, config, reserved, nbi)
        data = np.setdiff1d(np.arange(config.per_user), reserved)
        assert np.array_equal(
            demodulate_hard(cleaned, 4, config.symbol_var)[1].reshape(
                config.per_user, -1
            )[data],
            frame.bits.reshape(config.per_user, -1)[data],
        )
        reliable = np.setdiff1d(np.arange(config.per_user), reserved)[:5]
        aug = build_augmented_system(
            x_hat, cleaned, eq, ToneSets(reserved, reliable), sp, config
        )
        s_true = nbi[aug.column_map]
        assert aug.measurements.size == reserved.size + reliable.size
        assert np.abs(aug.measurements - aug.psi @ s_true).max() < 1e-9

    def test_row_reassembly_oracle(self):
        rng = np.random.default_rng(54)
        reserved = choose_reserved(CFG.per_user, 4, 11)
        nbi = synthesize_nbi([NbiSource(9.7, 1.0)], 32)
        _, eq, sp, system, x_hat, cleaned = self._stage1(rng, CFG, reserved, nbi)
        reliable = np.setdiff1d(np.arange(CFG.per_user), reserved)[-3:]
        aug = build_augmented_system(
            x_hat, cleaned, eq, ToneSets(reserved, reliable), sp, CFG
        )
        decided = hard_decision(cleaned[reliable], 4, CFG.symbol_var)
        assert np.array_equal(aug.measurements[:4], x_hat[reserved])
        assert np.array_equal(aug.measurements[4:], x_hat[reliable] - decided)
        psi_full, _ = aug.psi_full, aug.column_map
        assert np.array_equal(aug.psi, psi_full[np.concatenate([reserved, reliable])])

    def test_tone_set_validation(self):
        with pytest.raises(ValueError, match="overlap"):
            ToneSets(np.array([1, 2]), np.array([2, 3]))
        with pytest.raises(ValueError, match="duplicates"):
            ToneSets(np.array([1, 1]), np.array([3]))


class TestMeasurementNoiseVariance:
    def test_zf_closed_form(self):
        rng = np.random.default_rng(55)
        ch = channel_without_nulls(CFG, rng)
        eq = build_equalizer("zf", ch, CFG, u=0)
        reserved = choose_reserved(CFG.per_user, 4, 12)
        got = measurement_noise_variance(eq, ch, CFG, reserved)
        lam = ch.freq_response[user_comb(0, CFG)]
        expected = CFG.noise_var * np.mean(1.0 / np.abs(lam) ** 2)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_mmse_monte_carlo_oracle(self):
        rng = np.random.default_rng(56)
        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.15)
        ch = [channel_without_nulls(config, rng) for _ in (0, 1)]
        eq = build_equalizer("mmse", ch[0], config, u=0)
        reserved = choose_reserved(config.per_user, 4, 13)
        predicted = measurement_noise_variance(eq, ch[0], config, reserved)
        acc, trials = 0.0, 3000
        noise_rng = np.random.default_rng(57)
        for _ in range(trials):
            frames = [
                make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)
            ]
            y = transmit_receive(frames, ch, config, noise_rng=noise_rng)
            x_hat = equalize(eq, y)
            acc += float(np.mean(np.abs(x_hat[reserved]) ** 2))
        empirical = acc / trials
        assert abs(empirical - predicted) / predicted < 0.1


class TestZfNoiseCancellation:
    def params(self):
        return SabmpParams(lam=4.0 / 16.0, noise_var=0.01, t_max=3)

    def test_noiseless_input_bit_exact(self):
        rng = np.random.default_rng(58)
        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.0)
        reserved = choose_reserved(config.per_user, 4, 14)
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        channels = [channel_without_nulls(config, rng) for _ in (0, 1)]
        y = transmit_receive(frames, channels, config)
        eq = build_equalizer("zf", channels[0], config, u=0)
        x_hat = equalize(eq, y)
        cleaned, _ = zf_noise_cancellation(
            x_hat, channels[0], reserved, self.params(), config
        )
        assert np.array_equal(cleaned, x_hat)

    def test_flat_channel_output_nearly_unchanged(self):
        rng = np.random.default_rng(59)
        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=1e-6)
        reserved = choose_reserved(config.per_user, 4, 15)
        frames = [make_frame(u, config, rng, reserved if u == 0 else None) for u in (0, 1)]
        flat = [
            type(draw_channel(config, rng)).from_taps(np.array([1.0 + 0j]), 32)
            for _ in (0, 1)
        ]
        y = transmit_receive(frames, flat, config, noise_rng=np.random.default_rng(60))
        eq = build_equalizer("zf", flat[0], config, u=0)
        x_hat = equalize(eq, y)
        cleaned, _ = zf_noise_cancellation(
            x_hat, flat[0], reserved, SabmpParams(lam=0.25, noise_var=1e-6, t_max=3), config
        )
        assert np.abs(cleaned - x_hat).max() < 0.05 * np.abs(x_hat).max()

    def test_weak_bin_found_first(self):
        from nbisim import ChannelRealization

        config = SystemConfig(n_subcarriers=32, n_users=2, qam_order=4, noise_var=0.01)
        comb = user_comb(0, config)
        freq = np.ones(32, dtype=complex)
        weak_pos = 5
        freq[comb[weak_pos]] = 0.01
        ch = ChannelRealization(taps=np.fft.ifft(freq), freq_response=freq)
        reserved = choose_reserved(config.per_user, 6, 16)
        hits, trials = 0, 50
        noise_rng = np.random.default_rng(61)
        data_rng = np.random.default_rng(62)
        for _ in range(trials):
            frames = [
                make_frame(u, config, data_rng, reserved if u == 0 else None)
                for u in (0, 1)
            ]
            y = transmit_receive(frames, [ch, ch], config, noise_rng=noise_rng)
            x_hat = equalize(build_equalizer("zf", ch, config, u=0), y)
            _, est = zf_noise_cancellation(
                x_hat, ch, reserved, SabmpParams(lam=0.1, noise_var=0.01, t_max=4), config
            )
            if est.supports[0].indices[0] == weak_pos:
                hits += 1
        assert hits >= 0.9 * trials


class TestMrcCombine:
    def test_single_antenna_is_zf(self):
        rng = np.random.default_rng(63)
        ch = channel_without_nulls(CFG, rng)
        y = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        combined = mrc_combine([y], [ch], CFG, user=0)
        zf = equalize(build_equalizer("zf", ch, CFG, u=0), y)
        assert np.abs(combined - zf).max() < 1e-10

    def test_identical_channels_average(self):
        rng = np.random.default_rng(64)
        ch = channel_without_nulls(CFG, rng)
        y1 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        y2 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        combined = mrc_combine([y1, y2], [ch, ch], CFG)
        eq = build_equalizer("zf", ch, CFG, u=0)
        expected = 0.5 * (equalize(eq, y1) + equalize(eq, y2))
        assert np.abs(combined - expected).max() < 1e-10

    def test_dead_antenna_degenerates_to_other(self):
        from nbisim import ChannelRealization

        rng = np.random.default_rng(65)
        ch = channel_without_nulls(CFG, rng)
        dead = ChannelRealization(
            taps=np.zeros(1, dtype=complex), freq_response=np.zeros(32, dtype=complex)
        )
        y1 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        y2 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        combined = mrc_combine([y1, y2], [ch, dead], CFG)
        assert np.abs(combined - mrc_combine([y1], [ch], CFG)).max() < 1e-12

    def test_all_zero_bin_rejected(self):
        from nbisim import ChannelRealization

        dead = ChannelRealization(
            taps=np.zeros(1, dtype=complex), freq_response=np.zeros(32, dtype=complex)
        )
        y = np.ones(32, dtype=complex)
        with pytest.raises(ValueError, match="zero at bin"):
            mrc_combine([y], [dead], CFG)

    def test_length_checks(self):
        rng = np.random.default_rng(66)
        ch = channel_without_nulls(CFG, rng)
        with pytest.raises(ValueError, match="count mismatch"):
            mrc_combine([np.ones(32, dtype=complex)], [ch, ch], CFG)
        with pytest.raises(ValueError, match="no antenna"):
            mrc_combine([], [], CFG)
