// Fixed-point multilayer perceptron over the pluggable MAC datapath, with
// quantization-aware training (real-valued shadow weights, imprecise integer
// forward pass) and classification metrics.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "softreal/arith.hpp"
#include "softreal/fixed_point.hpp"
#include "softreal/rng.hpp"

namespace softreal {

enum class Activation : std::uint8_t { HardThreshold, PiecewiseSigmoid };

// 8-segment monotone sigmoid approximation over pre-activation [-4, 4),
// knot values in [0, 1).
inline constexpr double kSigmoidKnots[9] = {0.018, 0.047, 0.119, 0.269, 0.500,
                                            0.731, 0.881, 0.953, 0.982};

struct MlpModel {
    std::vector<std::uint32_t> topology; // e.g. {64, 8, 4}
    FixedPointFormat fmt;
    Activation act = Activation::PiecewiseSigmoid;
    FixedValue threshold{};                        // HardThreshold parameter
    std::vector<std::vector<FixedValue>> weights;  // per layer, [out * fan_in + in]

    void check() const {
        fmt.check();
        if (topology.size() < 2) throw std::invalid_argument("topology needs >= 2 layers");
        if (weights.size() != topology.size() - 1)
            throw std::invalid_argument("weight layer count mismatch");
        for (std::size_t l = 0; l + 1 < topology.size(); ++l)
            if (weights[l].size() != static_cast<std::size_t>(topology[l]) * topology[l + 1])
                throw std::invalid_argument("weight count does not match topology");
    }
};

struct TrainReport {
    double final_mse = 0;
    std::uint32_t epochs = 0; // TE#
    std::vector<double> trace;
    double correct_pct = 0;
    bool diverged = false;
};

struct Dataset {
    std::vector<std::vector<double>> x; // features in [0, 1)
    std::vector<std::uint32_t> label;
    std::uint32_t classes = 0;

    std::size_t size() const { return x.size(); }
};

// Balanced synthetic Gaussian-ish blobs on [0,1)^dims, deterministic in seed.
inline Dataset make_blobs(std::uint32_t per_class, std::uint32_t dims, std::uint32_t classes,
                          std::uint64_t seed, double spread = 0.06) {
    Dataset d;
    d.classes = classes;
    CounterStream centers(seed, 0xB10B5);
    std::vector<std::vector<double>> center(classes, std::vector<double>(dims));
    for (std::uint32_t c = 0; c < classes; ++c)
        for (std::uint32_t k = 0; k < dims; ++k)
            center[c][k] = 0.15 + 0.7 * centers.unit(c * dims + k);
    CounterStream noise(seed, 0x5A3);
    std::uint64_t idx = 0;
    for (std::uint32_t i = 0; i < per_class; ++i)
        for (std::uint32_t c = 0; c < classes; ++c) {
            std::vector<double> x(dims);
            for (std::uint32_t k = 0; k < dims; ++k) {
                const double u1 = noise.unit(idx++);
                const double u2 = noise.unit(idx++);
                const double u = u1 + u2 - 1.0; // triangular
                x[k] = std::clamp(center[c][k] + spread * 2.0 * u, 0.0, 0.999);
            }
            d.x.push_back(std::move(x));
            d.label.push_back(c);
        }
    return d;
}

namespace detail {

struct ActLut {
    // knot positions are whole units of the pre-activation; one unit is
    // 2^(2*frac) accumulator counts
    std::int64_t unit;                 // 2^(2 frac)
    std::array<std::int64_t, 9> v_fix; // knot values at format scale
    std::uint32_t frac;

    explicit ActLut(const FixedPointFormat& f) : frac(f.frac) {
        unit = std::int64_t{1} << (2 * f.frac);
        for (int k = 0; k < 9; ++k)
            v_fix[k] = static_cast<std::int64_t>(
                std::floor(kSigmoidKnots[k] * std::ldexp(1.0, static_cast<int>(f.frac)) + 0.5));
    }

    // integer-only piecewise-linear evaluation of the pre-activation x
    std::uint32_t eval_mag(std::int64_t x) const {
        if (x <= -4 * unit) return static_cast<std::uint32_t>(v_fix[0]);
        if (x >= 4 * unit) return static_cast<std::uint32_t>(v_fix[8]);
        const std::int64_t off = x + 4 * unit;
        const std::int64_t seg = off / unit; // 0..7
        const std::int64_t dx = off - seg * unit;
        const std::int64_t dv = v_fix[seg + 1] - v_fix[seg];
        return static_cast<std::uint32_t>(v_fix[seg] + (dv * dx + unit / 2) / unit);
    }

    // real-valued slope (d out / d pre-activation) for backprop
    double slope(double x_real) const {
        if (x_real <= -4 || x_real >= 4) return 0.0;
        const int seg = static_cast<int>(std::floor(x_real + 4.0));
        return kSigmoidKnots[seg + 1] - kSigmoidKnots[seg];
    }
};

} // namespace detail

// Forward/metrics engine; owns one MAC unit per layer.
class MlpEngine {
public:
    MlpEngine(const MlpModel& model, const ArithConfig& cfg)
        : model_(&model), lut_(model.fmt) {
        model.check();
        macs_.reserve(model.topology.size() - 1);
        for (std::size_t l = 0; l + 1 < model.topology.size(); ++l)
            macs_.emplace_back(model.fmt, cfg, model.topology[l]);
        faulty_ = cfg.faulty();
    }

    const MacUnit& mac_unit(std::size_t layer) const { return macs_[layer]; }

    std::vector<FixedValue> forward(std::span<const FixedValue> input, std::uint64_t trial = 0) {
        if (input.size() != model_->topology[0])
            throw std::invalid_argument("input length does not match the topology");
        std::vector<FixedValue> cur(input.begin(), input.end());
        for (std::size_t l = 0; l < macs_.size(); ++l) {
            if (faulty_) macs_[l].begin_trial(hash_mix(trial, l));
            const std::uint32_t fan_in = model_->topology[l];
            const std::uint32_t fan_out = model_->topology[l + 1];
            std::vector<FixedValue> next(fan_out);
            for (std::uint32_t o = 0; o < fan_out; ++o) {
                const auto w = std::span<const FixedValue>(
                    model_->weights[l].data() + static_cast<std::size_t>(o) * fan_in, fan_in);
                const MacResult r = macs_[l].mac(cur, w);
                next[o] = activate(r.value);
            }
            cur = std::move(next);
        }
        return cur;
    }

    // Fault-free batch forward for up to 64 samples; optionally records each
    // layer's pre-activations (accumulator counts) for training.
    void forward_batch(const std::vector<std::vector<FixedValue>>& inputs,
                       std::vector<std::vector<FixedValue>>& outputs,
                       std::vector<std::vector<std::vector<std::int64_t>>>* preacts = nullptr,
                       std::vector<std::vector<std::vector<FixedValue>>>* layer_in = nullptr) {
        const std::size_t n = inputs.size();
        std::vector<std::vector<FixedValue>> cur = inputs;
        if (preacts) preacts->assign(macs_.size(), {});
        if (layer_in) layer_in->assign(macs_.size(), {});
        std::vector<MacResult> res;
        for (std::size_t l = 0; l < macs_.size(); ++l) {
            if (layer_in) (*layer_in)[l] = cur;
            const std::uint32_t fan_in = model_->topology[l];
            const std::uint32_t fan_out = model_->topology[l + 1];
            std::vector<std::vector<FixedValue>> next(n, std::vector<FixedValue>(fan_out));
            if (preacts) (*preacts)[l].assign(n, std::vector<std::int64_t>(fan_out));
            for (std::uint32_t o = 0; o < fan_out; ++o) {
                const auto w = std::span<const FixedValue>(
                    model_->weights[l].data() + static_cast<std::size_t>(o) * fan_in, fan_in);
                macs_[l].mac_batch(cur, w, res);
                for (std::size_t s = 0; s < n; ++s) {
                    next[s][o] = activate(res[s].value);
                    if (preacts) (*preacts)[l][s][o] = res[s].value;
                }
            }
            cur = std::move(next);
        }
        outputs = std::move(cur);
    }

    double activation_slope(double preact_real) const {
        if (model_->act == Activation::HardThreshold) return 0.0;
        return lut_.slope(preact_real);
    }

private:
    FixedValue activate(std::int64_t acc) const {
        if (model_->act == Activation::HardThreshold) {
            const std::int64_t thr = static_cast<std::int64_t>(model_->threshold.mag)
                                     << model_->fmt.frac; // format -> product scale
            const std::int64_t sthr = model_->threshold.neg ? -thr : thr;
            const std::uint32_t one = std::min((1u << model_->fmt.frac),
                                               model_->fmt.max_mag());
            return acc >= sthr ? FixedValue{one, false} : FixedValue{0, false};
        }
        return FixedValue{lut_.eval_mag(acc), false};
    }

    const MlpModel* model_;
    detail::ActLut lut_;
    std::vector<MacUnit> macs_;
    bool faulty_ = false;
};

inline std::vector<FixedValue> mlp_forward(const MlpModel& model,
                                           std::span<const FixedValue> input,
                                           const ArithConfig& cfg, std::uint64_t trial = 0) {
    MlpEngine eng(model, cfg);
    return eng.forward(input, trial);
}

struct ClassifyResult {
    double mse = 0;
    double correct_pct = 0;
};

inline std::vector<FixedValue> quantize_vector(const FixedPointFormat& fmt,
                                               std::span<const double> xs) {
    std::vector<FixedValue> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = quantize(fmt, xs[i]);
    return out;
}

// Argmax classification and output MSE against one-hot labels. Under a faulty
// config each (sample, repeat) pair runs one independent fault trial.
inline ClassifyResult classify_metrics(const MlpModel& model, const Dataset& data,
                                       const ArithConfig& cfg, std::uint32_t repeats = 1,
                                       std::uint64_t trial_base = 0) {
    if (repeats == 0) throw std::invalid_argument("repeats must be >= 1");
    MlpEngine eng(model, cfg);
    const std::uint32_t out_n = model.topology.back();
    double se = 0;
    std::uint64_t correct = 0, total = 0;

    const bool fast = !cfg.faulty() && repeats == 1;
    std::vector<std::vector<FixedValue>> outs;
    if (fast) {
        for (std::size_t base = 0; base < data.size(); base += 64) {
            const std::size_t n = std::min<std::size_t>(64, data.size() - base);
            std::vector<std::vector<FixedValue>> in(n);
            for (std::size_t s = 0; s < n; ++s)
                in[s] = quantize_vector(model.fmt, data.x[base + s]);
            eng.forward_batch(in, outs);
            for (std::size_t s = 0; s < n; ++s) {
                std::size_t arg = 0;
                for (std::uint32_t o = 0; o < out_n; ++o) {
                    const double y = to_real(model.fmt, outs[s][o]);
                    const double t = data.label[base + s] == o ? 1.0 : 0.0;
                    se += (y - t) * (y - t);
                    if (outs[s][o].mag > outs[s][arg].mag) arg = o;
                }
                correct += arg == data.label[base + s];
                ++total;
            }
        }
    } else {
        for (std::size_t s = 0; s < data.size(); ++s) {
            const auto in = quantize_vector(model.fmt, data.x[s]);
            for (std::uint32_t r = 0; r < repeats; ++r) {
                const auto out = eng.forward(in, trial_base + s * repeats + r);
                std::size_t arg = 0;
                for (std::uint32_t o = 0; o < out_n; ++o) {
                    const double y = to_real(model.fmt, out[o]);
                    const double t = data.label[s] == o ? 1.0 : 0.0;
                    se += (y - t) * (y - t);
                    if (out[o].mag > out[arg].mag) arg = o;
                }
                correct += arg == data.label[s];
                ++total;
            }
        }
    }
    ClassifyResult r;
    r.mse = se / (static_cast<double>(total) * out_n);
    r.correct_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    return r;
}

// Fault-induced output degradation: mean squared deviation of the faulted
// outputs from the same model's fault-free outputs, averaged over the dataset
// and `repeats` independent fault trials per sample. This is the
// noise-floor-free view of "average MSE degradation" for sensitivity studies;
// against one-hot targets the same quantity appears with an additional
// zero-mean cross term that only adds sampling noise.
inline double fault_degradation_mse(const MlpModel& model, const Dataset& data,
                                    const ArithConfig& cfg, std::uint32_t repeats = 1,
                                    std::uint64_t trial_base = 0) {
    if (repeats == 0) throw std::invalid_argument("repeats must be >= 1");
    const std::uint32_t out_n = model.topology.back();

    // fault-free reference outputs
    ArithConfig clean = cfg;
    clean.fault.reset();
    MlpEngine ref_eng(model, clean);
    std::vector<std::vector<FixedValue>> ref(data.size());
    {
        std::vector<std::vector<FixedValue>> outs;
        for (std::size_t base = 0; base < data.size(); base += 64) {
            const std::size_t n = std::min<std::size_t>(64, data.size() - base);
            std::vector<std::vector<FixedValue>> in(n);
            for (std::size_t s = 0; s < n; ++s)
                in[s] = quantize_vector(model.fmt, data.x[base + s]);
            ref_eng.forward_batch(in, outs);
            for (std::size_t s = 0; s < n; ++s) ref[base + s] = outs[s];
        }
    }

    MlpEngine eng(model, cfg);
    double se = 0;
    std::uint64_t n_out = 0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto in = quantize_vector(model.fmt, data.x[s]);
        for (std::uint32_t r = 0; r < repeats; ++r) {
            const auto out = eng.forward(in, trial_base + s * repeats + r);
            for (std::uint32_t o = 0; o < out_n; ++o) {
                const double dy = to_real(model.fmt, out[o]) - to_real(model.fmt, ref[s][o]);
                se += dy * dy;
            }
            n_out += out_n;
        }
    }
    return se / static_cast<double>(n_out);
}

struct TrainConfig {
    double lr = 1.0;
    std::uint32_t max_epochs = 200;
    double target_mse = 0.01;
    std::uint64_t seed = 1;
};

struct TrainOutcome {
    MlpModel model;
    TrainReport report;
};

// Full-batch gradient training with real-valued shadow weights. The forward
// pass runs through the quantized imprecise pipeline; gradients use the
// straight-through estimator with the activation LUT's segment slopes.
inline TrainOutcome mlp_train(const Dataset& data, std::vector<std::uint32_t> topology,
                              const FixedPointFormat& fmt, const ArithConfig& cfg,
                              const TrainConfig& tc) {
    if (data.size() == 0) throw std::invalid_argument("dataset must be non-empty");
    if (tc.max_epochs == 0) throw std::invalid_argument("max epochs must be >= 1");
    if (topology.size() < 2) throw std::invalid_argument("topology needs >= 2 layers");
    if (topology.back() != data.classes)
        throw std::invalid_argument("output layer size must equal the class count");

    const std::size_t layers = topology.size() - 1;
    std::vector<std::vector<double>> shadow(layers);
    CounterStream init(tc.seed, 0x111717);
    std::uint64_t widx = 0;
    for (std::size_t l = 0; l < layers; ++l) {
        shadow[l].resize(static_cast<std::size_t>(topology[l]) * topology[l + 1]);
        const double scale = 1.2 / std::sqrt(static_cast<double>(topology[l]));
        for (auto& w : shadow[l]) w = (init.unit(widx++) * 2.0 - 1.0) * scale;
    }

    MlpModel model;
    model.topology = topology;
    model.fmt = fmt;
    model.act = Activation::PiecewiseSigmoid;
    model.weights.assign(layers, {});

    const double wmax = fmt.max_value();
    auto requantize = [&] {
        for (std::size_t l = 0; l < layers; ++l) {
            model.weights[l].resize(shadow[l].size());
            for (std::size_t i = 0; i < shadow[l].size(); ++i)
                model.weights[l][i] = quantize(fmt, shadow[l][i]);
        }
    };

    // quantized inputs and real views, fixed for the whole run
    std::vector<std::vector<FixedValue>> qx(data.size());
    for (std::size_t s = 0; s < data.size(); ++s)
        qx[s] = quantize_vector(fmt, data.x[s]);

    TrainReport rep;
    double mse = 0;
    const double preact_scale = std::ldexp(1.0, -2 * static_cast<int>(fmt.frac));

    for (std::uint32_t epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        requantize();
        MlpEngine eng(model, cfg);

        // grads accumulated over the full batch
        std::vector<std::vector<double>> grad(layers);
        for (std::size_t l = 0; l < layers; ++l) grad[l].assign(shadow[l].size(), 0.0);

        double se = 0;
        std::size_t outputs_counted = 0;
        for (std::size_t base = 0; base < data.size(); base += 64) {
            const std::size_t n = std::min<std::size_t>(64, data.size() - base);
            std::vector<std::vector<FixedValue>> in(qx.begin() + base, qx.begin() + base + n);
            std::vector<std::vector<FixedValue>> out;
            std::vector<std::vector<std::vector<std::int64_t>>> pre;
            std::vector<std::vector<std::vector<FixedValue>>> lin;
            eng.forward_batch(in, out, &pre, &lin);

            for (std::size_t s = 0; s < n; ++s) {
                // output layer deltas
                std::vector<double> delta(topology.back());
                for (std::uint32_t o = 0; o < topology.back(); ++o) {
                    const double y = to_real(fmt, out[s][o]);
                    const double t = data.label[base + s] == o ? 1.0 : 0.0;
                    const double err = y - t;
                    se += err * err;
                    ++outputs_counted;
                    const double x = static_cast<double>(pre[layers - 1][s][o]) * preact_scale;
                    delta[o] = err * eng.activation_slope(x);
                }
                for (std::size_t l = layers; l-- > 0;) {
                    const std::uint32_t fan_in = topology[l];
                    const std::uint32_t fan_out = topology[l + 1];
                    std::vector<double> next_delta;
                    if (l > 0) next_delta.assign(fan_in, 0.0);
                    for (std::uint32_t o = 0; o < fan_out; ++o) {
                        const double d = delta[o];
                        if (d == 0.0 && l > 0) continue;
                        for (std::uint32_t i = 0; i < fan_in; ++i) {
                            const double xin = to_real(fmt, lin[l][s][i]);
                            grad[l][static_cast<std::size_t>(o) * fan_in + i] += d * xin;
                            if (l > 0)
                                next_delta[i] += d * to_real(fmt, model.weights[l][static_cast<std::size_t>(o) * fan_in + i]);
                        }
                    }
                    if (l > 0) {
                        for (std::uint32_t i = 0; i < fan_in; ++i) {
                            const double x = static_cast<double>(pre[l - 1][s][i]) * preact_scale;
                            next_delta[i] *= eng.activation_slope(x);
                        }
                        delta = std::move(next_delta);
                    }
                }
            }
        }

        mse = se / static_cast<double>(outputs_counted);
        rep.trace.push_back(mse);
        rep.epochs = epoch;
        if (!std::isfinite(mse)) {
            rep.diverged = true;
            break;
        }
        if (mse <= tc.target_mse) break;

        const double scale = tc.lr / static_cast<double>(data.size());
        for (std::size_t l = 0; l < layers; ++l)
            for (std::size_t i = 0; i < shadow[l].size(); ++i) {
                shadow[l][i] -= scale * grad[l][i];
                shadow[l][i] = std::clamp(shadow[l][i], -wmax, wmax);
            }
    }

    requantize();
    rep.final_mse = mse;
    auto cls = classify_metrics(model, data, cfg);
    rep.correct_pct = cls.correct_pct;
    return {std::move(model), std::move(rep)};
}

} // namespace softreal
