import numpy as np
import pytest

from archsense.dataset import StressSample, WindowSample
from archsense.hrv import HrvFeatureVector
from archsense.nn import (
    LstmModel,
    MlpModel,
    TrainConfig,
    available_backends,
    gradient_check,
    init_lstm,
    init_mlp,
    load_model,
    lstm_forward,
    lstm_train,
    mlp_forward,
    mlp_train,
    save_model,
)


def zero_lstm(input_dim=5, hidden=4):
    return LstmModel(
        w=np.zeros((input_dim + hidden, 4 * hidden)),
        b=np.zeros(4 * hidden),
        w_out=np.zeros(hidden),
        b_out=0.0,
        mu=np.zeros(input_dim),
        sigma=np.ones(input_dim),
    )


def bump_window_samples(n_per_class, t=20, seed=0):
    """Separable task: flat noise vs a mid-window bump on every channel."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(2 * n_per_class):
        label = i % 2
        x = rng.normal(0, 0.1, size=(t, 5))
        if label:
            x[t // 4 : 3 * t // 4] += 2.0
        out.append(WindowSample(features=x, label=label, origin=("s", i)))
    return out


def stress_samples(n_per_class, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(2 * n_per_class):
        label = i % 2
        base = np.array([65.0, 50, 70, 60, 40, 900, 1500, 30, 50, 55, 1.5])
        shift = np.array([30.0, -35, -50, -30, -35, -800, -1300, -28, -35, -40, 0.4])
        vec = base + label * shift + rng.normal(0, 2.0, size=11)
        fv = HrvFeatureVector(*vec[:10], samp_en=float(vec[10]))
        out.append(StressSample(features=fv, label=label, origin=("s", i)))
    return out


class TestLstmForward:
    def test_output_in_open_interval(self):
        rng = np.random.default_rng(0)
        model = init_lstm(seed=1)
        for _ in range(10):
            p = lstm_forward(model, rng.normal(size=(30, 5)))
            assert 0.0 < p < 1.0

    def test_zero_model_gives_half(self):
        p = lstm_forward(zero_lstm(), np.random.default_rng(0).normal(size=(12, 5)))
        assert p == pytest.approx(0.5)

    def test_deterministic(self):
        model = init_lstm(seed=2)
        seq = np.random.default_rng(3).normal(size=(40, 5))
        assert lstm_forward(model, seq) == lstm_forward(model, seq)

    def test_rejects_non_finite(self):
        model = init_lstm(seed=1)
        seq = np.full((10, 5), np.nan)
        with pytest.raises(ValueError):
            lstm_forward(model, seq)


class TestLstmTrain:
    def test_learns_separable_task(self):
        samples = bump_window_samples(40)
        model = lstm_train(samples, TrainConfig(seed=0))
        probs = model.predict_proba(np.stack([s.features for s in samples]))
        preds = (probs > 0.5).astype(int)
        labels = np.array([s.label for s in samples])
        assert (preds == labels).mean() >= 0.95
        assert model.loss_history[-1] < model.loss_history[0]

    def test_zero_learning_rate_keeps_init(self):
        samples = bump_window_samples(10)
        cfg = TrainConfig(learning_rate=0.0, epochs=1, seed=4)
        model = lstm_train(samples, cfg, hidden_dim=6)
        x = np.stack([s.features for s in samples]).astype(float)
        from archsense.nn.lstm import _init_params, fit_standardization
        rng = np.random.default_rng(cfg.seed)
        w, b, w_out, b_out = _init_params(5, 6, rng)
        np.testing.assert_array_equal(model.w, w)
        np.testing.assert_array_equal(model.w_out, w_out)

    def test_seed_determinism(self):
        samples = bump_window_samples(15)
        m1 = lstm_train(samples, TrainConfig(epochs=3, seed=9), hidden_dim=8)
        m2 = lstm_train(samples, TrainConfig(epochs=3, seed=9), hidden_dim=8)
        np.testing.assert_array_equal(m1.w, m2.w)
        np.testing.assert_array_equal(m1.b, m2.b)
        assert m1.loss_history == m2.loss_history

    def test_single_class_rejected(self):
        samples = [s for s in bump_window_samples(10) if s.label == 1]
        with pytest.raises(ValueError):
            lstm_train(samples, TrainConfig(epochs=1, seed=0))

    def test_loss_finite_every_epoch(self):
        samples = bump_window_samples(20)
        model = lstm_train(samples, TrainConfig(epochs=10, seed=1), hidden_dim=8)
        assert np.isfinite(model.loss_history).all()


class TestMlp:
    def test_zero_model_gives_half(self):
        model = MlpModel(w1=np.zeros((11, 4)), b1=np.zeros(4), w2=np.zeros(4), b2=0.0,
                         mu=np.zeros(11), sigma=np.ones(11))
        assert mlp_forward(model, np.zeros(11)) == pytest.approx(0.5)

    def test_output_in_open_interval(self):
        rng = np.random.default_rng(5)
        model = init_mlp(seed=6)
        for _ in range(10):
            p = mlp_forward(model, rng.normal(size=11))
            assert 0.0 < p < 1.0

    def test_monotone_with_positive_weights(self):
        # Two rectifier units, all-positive path weights: increasing any input
        # coordinate can never decrease the output probability.
        model = MlpModel(
            w1=np.full((11, 2), 0.3),
            b1=np.array([0.1, -0.2]),
            w2=np.array([0.8, 0.5]),
            b2=-0.1,
            mu=np.zeros(11),
            sigma=np.ones(11),
        )
        x = np.zeros(11)
        values = np.linspace(-3, 3, 25)
        x[4] = values[0]
        prev = mlp_forward(model, x)
        for v in values[1:]:
            x[4] = v
            cur = mlp_forward(model, x)
            assert cur >= prev - 1e-15
            prev = cur

    def test_train_two_regimes(self):
        from archsense.dataset import split

        samples = stress_samples(60)
        train, test = split(samples, 0.7, seed=0)
        model = mlp_train(train, TrainConfig(seed=0))
        x = np.stack([s.features.to_array() for s in test])
        y = np.array([s.label for s in test])
        preds = (model.predict_proba(x) > 0.5).astype(int)
        assert (preds == y).mean() >= 0.90

    def test_zero_learning_rate_keeps_init(self):
        samples = stress_samples(10)
        model = mlp_train(samples, TrainConfig(learning_rate=0.0, epochs=2, seed=3))
        from archsense.nn.mlp import _init_params
        w1, b1, w2, b2 = _init_params(11, 16, np.random.default_rng(3))
        np.testing.assert_array_equal(model.w1, w1)
        np.testing.assert_array_equal(model.w2, w2)

    def test_seed_determinism(self):
        samples = stress_samples(20)
        m1 = mlp_train(samples, TrainConfig(epochs=4, seed=8))
        m2 = mlp_train(samples, TrainConfig(epochs=4, seed=8))
        np.testing.assert_array_equal(m1.w1, m2.w1)
        np.testing.assert_array_equal(m1.b1, m2.b1)


class TestGradientCheck:
    def test_lstm_gradients(self):
        assert gradient_check("lstm", seed=0) <= 1e-4
        assert gradient_check("lstm", seed=1) <= 1e-4

    def test_mlp_gradients(self):
        assert gradient_check("mlp", seed=0) <= 1e-5
        assert gradient_check("mlp", seed=1) <= 1e-5

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            gradient_check("transformer", seed=0)


class TestModelIO:
    def test_lstm_round_trip(self, tmp_path):
        model = init_lstm(seed=11)
        cfg = TrainConfig(epochs=7, seed=11)
        path = tmp_path / "m.model"
        save_model(model, path, cfg)
        loaded, loaded_cfg = load_model(path)
        np.testing.assert_array_equal(loaded.w, model.w)
        np.testing.assert_array_equal(loaded.w_out, model.w_out)
        assert loaded.b_out == model.b_out
        assert loaded_cfg == cfg
        seq = np.random.default_rng(1).normal(size=(25, 5))
        assert lstm_forward(loaded, seq) == lstm_forward(model, seq)

    def test_mlp_round_trip(self, tmp_path):
        model = init_mlp(seed=12)
        path = tmp_path / "m.model"
        save_model(model, path)
        loaded, _ = load_model(path)
        x = np.random.default_rng(2).normal(size=11)
        assert mlp_forward(loaded, x) == mlp_forward(model, x)

    def test_truncated_rejected(self, tmp_path):
        path = tmp_path / "m.model"
        save_model(init_lstm(seed=1), path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 40])
        with pytest.raises(ValueError, match="truncated"):
            load_model(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "m.model"
        path.write_bytes(b"not a model file at all" * 10)
        with pytest.raises(ValueError, match="magic"):
            load_model(path)

    def test_input_dim_mismatch_rejected(self, tmp_path):
        path = tmp_path / "m.model"
        save_model(init_lstm(input_dim=5, seed=1), path)
        with pytest.raises(ValueError, match="input_dim"):
            load_model(path, expect_input_dim=11)


class TestBackends:
    def test_fallback_always_available(self):
        assert "numpy" in available_backends()

    @pytest.mark.skipif("compiled" not in available_backends(),
                        reason="compiled kernels not built")
    def test_backends_agree(self):
        from archsense.nn import _kernels_cy as kc
        from archsense.nn import _kernels_np as kn

        rng = np.random.default_rng(21)
        for B, T, D, H in [(1, 1, 5, 3), (4, 17, 5, 8), (32, 80, 5, 32)]:
            w = rng.normal(size=(D + H, 4 * H)) * 0.3
            b = rng.normal(size=4 * H) * 0.1
            w_out = rng.normal(size=H) * 0.3
            b_out = float(rng.normal())
            x = np.ascontiguousarray(rng.normal(size=(B, T, D)))
            y = rng.integers(0, 2, B).astype(float)
            np.testing.assert_allclose(
                kn.lstm_probs(w, b, w_out, b_out, x),
                kc.lstm_probs(w, b, w_out, b_out, x),
                rtol=1e-12, atol=1e-15,
            )
            ln, dwn, dbn, dwon, dbon = kn.lstm_loss_and_grads(w, b, w_out, b_out, x, y)
            lc, dwc, dbc, dwoc, dboc = kc.lstm_loss_and_grads(w, b, w_out, b_out, x, y)
            assert ln == pytest.approx(lc, rel=1e-12)
            np.testing.assert_allclose(dwn, dwc, rtol=1e-10, atol=1e-14)
            np.testing.assert_allclose(dbn, dbc, rtol=1e-10, atol=1e-14)
            np.testing.assert_allclose(dwon, dwoc, rtol=1e-10, atol=1e-14)
            assert dbon == pytest.approx(dboc, rel=1e-10, abs=1e-14)
