"""Channel generation, noise, application, and JSON persistence."""

import json

import numpy as np
import pytest

from realign import (
    ChannelConfig,
    ChannelMatrix,
    NoiseModel,
    apply_channel,
    generate_channel,
    load_channel,
    save_channel,
)


class TestChannelConfig:
    def test_rejects_bad_dimensions(self):
        with pytest.raises(ValueError):
            ChannelConfig(K=1, M=1, N=1, seed=0)
        with pytest.raises(ValueError):
            ChannelConfig(K=2, M=0, N=1, seed=0)
        with pytest.raises(ValueError):
            ChannelConfig(K=2, M=1, N=0, seed=0)

    def test_rejects_unknown_profile(self):
        with pytest.raises(ValueError):
            ChannelConfig(K=2, M=1, N=1, seed=0, profile="rician")


class TestGeneration:
    def test_shape_and_determinism(self):
        cfg = ChannelConfig(K=3, M=2, N=2, seed=99)
        H1 = generate_channel(cfg)
        H2 = generate_channel(cfg)
        assert H1.blocks.shape == (3, 3, 2, 2)
        assert np.array_equal(H1.blocks, H2.blocks)
        H3 = generate_channel(ChannelConfig(K=3, M=2, N=2, seed=100))
        assert not np.array_equal(H1.blocks, H3.blocks)

    def test_bounded_uniform_magnitudes(self):
        # profile contract: |h| uniform on [1/2, 2], random sign
        for seed in range(5):
            H = generate_channel(ChannelConfig(K=2, M=2, N=3, seed=seed))
            mags = np.abs(H.blocks)
            assert mags.min() >= 0.5
            assert mags.max() <= 2.0
        pooled = np.concatenate([
            generate_channel(ChannelConfig(K=4, M=2, N=2, seed=s)).blocks.ravel()
            for s in range(20)
        ])
        assert (pooled < 0).any() and (pooled > 0).any()

    def test_standard_normal_profile(self):
        H = generate_channel(
            ChannelConfig(K=2, M=3, N=3, seed=1, profile="standard-normal"))
        assert np.all(np.isfinite(H.blocks))
        assert np.all(H.blocks != 0)

    def test_block_and_coeff_accessors(self):
        H = generate_channel(ChannelConfig(K=2, M=2, N=3, seed=7))
        assert H.block(1, 0).shape == (3, 2)
        assert H.coeff(1, 0, 2, 1) == H.blocks[1, 0, 2, 1]

    def test_blocks_are_read_only(self):
        H = generate_channel(ChannelConfig(K=2, M=1, N=1, seed=7))
        with pytest.raises(ValueError):
            H.blocks[0, 0, 0, 0] = 5.0


class TestApplyChannel:
    def test_matches_hand_computed_single_antenna(self):
        # oracle: y_j = sum_k h_{jk} x_k, written out longhand for K=2, M=N=1
        H = generate_channel(ChannelConfig(K=2, M=1, N=1, seed=5))
        x = np.array([[1.5], [-0.25]])
        y = apply_channel(H, x)
        h = H.blocks
        want0 = h[0, 0, 0, 0] * 1.5 + h[0, 1, 0, 0] * -0.25
        want1 = h[1, 0, 0, 0] * 1.5 + h[1, 1, 0, 0] * -0.25
        assert y.shape == (2, 1)
        assert y[0, 0] == pytest.approx(want0, rel=1e-15)
        assert y[1, 0] == pytest.approx(want1, rel=1e-15)

    def test_matches_block_matmul(self):
        rng = np.random.default_rng(0)
        for seed in range(10):
            H = generate_channel(ChannelConfig(K=3, M=2, N=2, seed=seed))
            x = rng.normal(size=(3, 2))
            y = apply_channel(H, x)
            expect = np.stack([
                sum(H.block(j, k) @ x[k] for k in range(3)) for j in range(3)
            ])
            assert np.allclose(y, expect, rtol=1e-12, atol=1e-12)

    def test_noise_is_added_once(self):
        H = generate_channel(ChannelConfig(K=2, M=1, N=2, seed=5))
        x = np.zeros((2, 1))
        noise = NoiseModel.from_seed(123)
        y = apply_channel(H, x, noise=noise)
        expect = NoiseModel.from_seed(123).draw((2, 2))
        assert np.array_equal(y, expect)

    def test_rejects_wrong_shape(self):
        H = generate_channel(ChannelConfig(K=2, M=2, N=2, seed=5))
        with pytest.raises(ValueError):
            apply_channel(H, np.zeros((2, 3)))


class TestNoiseModel:
    def test_seeded_reproducibility(self):
        a = NoiseModel.from_seed(42).draw((4, 4))
        b = NoiseModel.from_seed(42).draw((4, 4))
        assert np.array_equal(a, b)

    def test_variance_scaling(self):
        draws = NoiseModel.from_seed(0, variance=4.0).draw(200_000)
        assert draws.std() == pytest.approx(2.0, rel=0.02)

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ValueError):
            NoiseModel.from_seed(0, variance=0.0)


class TestPersistence:
    def test_round_trip_is_bit_exact(self, tmp_path):
        for seed in range(5):
            H = generate_channel(ChannelConfig(K=2, M=2, N=3, seed=seed))
            path = tmp_path / f"ch{seed}.json"
            save_channel(H, path)
            back = load_channel(path)
            assert np.array_equal(back.blocks, H.blocks)
            assert (back.K, back.M, back.N) == (H.K, H.M, H.N)
            assert back.seed == H.seed and back.profile == H.profile

    def test_load_rejects_missing_field(self, tmp_path):
        H = generate_channel(ChannelConfig(K=2, M=1, N=1, seed=1))
        path = tmp_path / "ch.json"
        save_channel(H, path)
        data = json.loads(path.read_text())
        del data["blocks"]
        path.write_text(json.dumps(data))
        with pytest.raises(ValueError):
            load_channel(path)

    def test_load_rejects_wrong_block_shape(self, tmp_path):
        H = generate_channel(ChannelConfig(K=2, M=1, N=1, seed=1))
        path = tmp_path / "ch.json"
        save_channel(H, path)
        data = json.loads(path.read_text())
        data["blocks"] = [[1.0], [2.0]]
        path.write_text(json.dumps(data))
        with pytest.raises(ValueError):
            load_channel(path)

    def test_load_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json {")
        with pytest.raises(ValueError):
            load_channel(path)

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ValueError):
            load_channel(tmp_path / "nope.json")

    def test_direct_construction_rejects_zeros(self):
        blocks = np.ones((2, 2, 1, 1))
        blocks[0, 1, 0, 0] = 0.0
        with pytest.raises(ValueError):
            ChannelMatrix(K=2, M=1, N=1, seed=0, profile="bounded-uniform",
                          blocks=blocks)
