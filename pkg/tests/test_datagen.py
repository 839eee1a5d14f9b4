"""Synthetic stream generators and stream-file parsing."""

import numpy as np
import pytest

from streamquant.datagen import (
    StreamSpec,
    format_stream,
    gen_mixture,
    gen_stationary,
    inject_extremes,
    materialize,
    read_stream,
    write_stream,
)


class TestStationary:
    def test_moments_at_scale(self):
        x = gen_stationary(1_000_000, seed=1)
        assert abs(x.mean() - 5.0) < 0.01
        assert abs(x.std() - 1.0) < 0.01

    def test_single_draw_finite(self):
        x = gen_stationary(1, seed=2)
        assert x.shape == (1,)
        assert np.isfinite(x[0])

    def test_deterministic(self):
        assert np.array_equal(gen_stationary(5000, seed=3), gen_stationary(5000, seed=3))
        assert not np.array_equal(gen_stationary(5000, seed=3), gen_stationary(5000, seed=4))

    def test_custom_parameters(self):
        x = gen_stationary(200_000, seed=5, mean=50.0, variance=25.0)
        assert abs(x.mean() - 50.0) < 0.1
        assert abs(x.std() - 5.0) < 0.1

    def test_all_finite(self):
        assert np.all(np.isfinite(gen_stationary(100_000, seed=6)))


class TestMixture:
    def test_mean_at_scale(self):
        y = gen_mixture(1_000_000, seed=1)
        assert abs(y.mean() - 7.5) < 0.02

    def test_coin_frequency(self):
        # Datum closer to mode 1 (5) vs mode 2 (10): crude but effective coin read.
        y = gen_mixture(100_000, seed=2)
        frac_low = np.mean(y < 7.5)
        sigma = 0.5 / np.sqrt(100_000)
        # Modes overlap a little; allow the overlap-induced bias on top of 3 sigma.
        assert abs(frac_low - 0.5) < 3 * sigma + 0.12

    def test_deterministic(self):
        assert np.array_equal(gen_mixture(5000, seed=9), gen_mixture(5000, seed=9))

    def test_mixture_spread_wider_than_single_mode(self):
        y = gen_mixture(200_000, seed=3)
        assert y.std() > 2.0  # mixture std is ~2.96


class TestReadWrite:
    def test_basic_parse(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("1\n2\n3\n")
        assert read_stream(p).tolist() == [1.0, 2.0, 3.0]

    def test_comment_and_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("# header comment\n1.5\n\n2.5\n")
        assert read_stream(p).tolist() == [1.5, 2.5]

    def test_parse_error_carries_line_number(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("1\nabc\n")
        with pytest.raises(ValueError, match=":2"):
            read_stream(p)

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("# nothing here\n")
        with pytest.raises(ValueError, match="no data"):
            read_stream(p)

    def test_round_trip_exact(self, tmp_path):
        values = gen_mixture(500, seed=11)
        p = tmp_path / "s.txt"
        write_stream(p, values, header="mixture seed=11")
        back = read_stream(p)
        assert np.array_equal(back, values)

    def test_format_stream_header(self):
        text = format_stream([1.0], header="two\nlines")
        assert text.splitlines()[:2] == ["# two", "# lines"]


class TestStreamSpec:
    def test_materialize_kinds(self, tmp_path):
        a = materialize(StreamSpec(kind="stationary-normal", count=100, seed=1))
        assert np.array_equal(a, gen_stationary(100, seed=1))
        b = materialize(StreamSpec(kind="coin-mixture", count=100, seed=1))
        assert np.array_equal(b, gen_mixture(100, seed=1))
        p = tmp_path / "s.txt"
        write_stream(p, [1.0, 2.0])
        c = materialize(StreamSpec(kind="file", path=str(p)))
        assert c.tolist() == [1.0, 2.0]

    def test_custom_components(self):
        spec = StreamSpec(
            kind="stationary-normal", count=50_000, seed=2, components=((0.0, 4.0),)
        )
        x = materialize(spec)
        assert abs(x.mean()) < 0.1
        assert abs(x.std() - 2.0) < 0.1

    def test_validation(self):
        with pytest.raises(ValueError):
            StreamSpec(kind="bogus", count=10)
        with pytest.raises(ValueError):
            StreamSpec(kind="stationary-normal", count=0)
        with pytest.raises(ValueError):
            StreamSpec(kind="file")
        with pytest.raises(ValueError):
            StreamSpec(kind="coin-mixture", count=10, components=((5.0, -1.0),))


class TestInjectExtremes:
    def test_replaces_every_kth_with_scaled_running_max(self):
        base = np.arange(1.0, 21.0)
        out = inject_extremes(base, every=5, factor=100.0)
        assert out[4] == 100.0 * 4.0  # running max of first four
        assert out[9] == 100.0 * out[4]  # injections compound
        assert out[3] == 4.0  # untouched elsewhere
        assert out.size == base.size

    def test_no_full_block_no_injection(self):
        base = np.arange(1.0, 5.0)
        out = inject_extremes(base, every=10)
        assert np.array_equal(out, base)

    def test_rejects_bad_every(self):
        with pytest.raises(ValueError):
            inject_extremes([1.0], every=0)
