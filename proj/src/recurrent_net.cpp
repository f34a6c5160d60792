#include "textpm/recurrent_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "textpm/error.hpp"
#include "textpm/rng.hpp"

namespace textpm {
namespace {

constexpr double kLogFloor = 1e-12;
constexpr std::array<Task, kTaskCount> kTasks{Task::next_activity, Task::next_delta, Task::outcome, Task::cycle};

bool is_class_task(Task t) { return t == Task::next_activity || t == Task::outcome; }

Eigen::Index head_classes(const NetConfig& c, Task t) {
    switch (t) {
        case Task::next_activity: return static_cast<Eigen::Index>(c.activity_classes);
        case Task::outcome: return static_cast<Eigen::Index>(c.outcome_classes);
        default: return 1;
    }
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& a) { return (1.0 / (1.0 + (-a.array()).exp())).matrix(); }

void softmax_columns(Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        auto col = m.col(j);
        const double mx = col.maxCoeff();
        col = (col.array() - mx).exp();
        col /= col.sum();
    }
}

struct LayerCache {
    std::vector<Eigen::MatrixXd> i, f, g, o, c, tc, h;
};

struct HeadCache {
    Eigen::MatrixXd pre, z, out;  // out: probabilities for class heads, raw scalars otherwise
};

struct ForwardCache {
    std::vector<Eigen::MatrixXd> x;  // per step, D x B
    std::vector<LayerCache> layers;
    std::array<HeadCache, kTaskCount> heads;
};

/// Runs a batch of equal-length sequences; column b of every matrix is sample b.
void forward_group(const NetParams& p, std::span<const SequenceRef> seqs, ForwardCache& cache) {
    const NetConfig& cfg = p.config();
    const auto B = static_cast<Eigen::Index>(seqs.size());
    const std::size_t T = seqs.front().k;
    const auto H = static_cast<Eigen::Index>(cfg.hidden_units);
    const auto D = static_cast<Eigen::Index>(cfg.input_dim);

    cache.x.assign(T, Eigen::MatrixXd(D, B));
    for (Eigen::Index b = 0; b < B; ++b) {
        const auto& s = seqs[static_cast<std::size_t>(b)];
        if (s.events->cols() != D) throw LengthError("encoded event width does not match the network input");
        if (s.k != T || s.k == 0 || static_cast<Eigen::Index>(s.k) > s.events->rows()) {
            throw LengthError("invalid prefix length for network input");
        }
        for (std::size_t t = 0; t < T; ++t) cache.x[t].col(b) = s.events->row(static_cast<Eigen::Index>(t)).transpose();
    }

    cache.layers.assign(cfg.shared_layers, LayerCache{});
    for (std::size_t l = 0; l < cfg.shared_layers; ++l) {
        const auto W = p.tensor(NetParams::lstm_slot(l, 0));
        const auto U = p.tensor(NetParams::lstm_slot(l, 1));
        const auto bias = p.tensor(NetParams::lstm_slot(l, 2));
        const std::vector<Eigen::MatrixXd>& in = l == 0 ? cache.x : cache.layers[l - 1].h;
        LayerCache& lc = cache.layers[l];
        Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(H, B);
        Eigen::MatrixXd c_prev = Eigen::MatrixXd::Zero(H, B);
        for (std::size_t t = 0; t < T; ++t) {
            Eigen::MatrixXd a = W * in[t] + U * h_prev;
            a.colwise() += bias.col(0);
            lc.i.push_back(sigmoid(a.topRows(H)));
            lc.f.push_back(sigmoid(a.middleRows(H, H)));
            lc.g.push_back(a.middleRows(2 * H, H).array().tanh().matrix());
            lc.o.push_back(sigmoid(a.bottomRows(H)));
            lc.c.push_back(lc.f.back().cwiseProduct(c_prev) + lc.i.back().cwiseProduct(lc.g.back()));
            lc.tc.push_back(lc.c.back().array().tanh().matrix());
            lc.h.push_back(lc.o.back().cwiseProduct(lc.tc.back()));
            h_prev = lc.h.back();
            c_prev = lc.c.back();
        }
    }

    const Eigen::MatrixXd& top = cache.layers.back().h.back();
    for (Task task : kTasks) {
        HeadCache& hc = cache.heads[static_cast<std::size_t>(task)];
        hc.pre = p.tensor(p.head_slot(task, 0)) * top;
        hc.pre.colwise() += p.tensor(p.head_slot(task, 1)).col(0);
        hc.z = hc.pre.cwiseMax(0.0);
        hc.out = p.tensor(p.head_slot(task, 2)) * hc.z;
        hc.out.colwise() += p.tensor(p.head_slot(task, 3)).col(0);
        if (is_class_task(task)) softmax_columns(hc.out);
    }
}

Prediction prediction_at(const ForwardCache& cache, Eigen::Index b) {
    Prediction pr;
    pr.next_activity = cache.heads[0].out.col(b);
    pr.next_delta = cache.heads[1].out(0, b);
    pr.outcome = cache.heads[2].out.col(b);
    pr.cycle = cache.heads[3].out(0, b);
    return pr;
}

std::size_t target_class(const EncodedTargets& t, Task task) {
    return task == Task::next_activity ? t.next_activity : t.outcome;
}

double target_value(const EncodedTargets& t, Task task) { return task == Task::next_delta ? t.next_delta : t.cycle; }

/// Accumulates scale * d(loss)/d(params) for one equal-length group into `grad`
/// and adds the group's summed losses to `sum`.
void backward_group(const NetParams& p, const ForwardCache& cache, std::span<const EncodedTargets* const> targets,
                    double scale, Eigen::VectorXd& grad, LossBreakdown& sum) {
    const NetConfig& cfg = p.config();
    const auto B = static_cast<Eigen::Index>(targets.size());
    const auto H = static_cast<Eigen::Index>(cfg.hidden_units);
    const std::size_t T = cache.x.size();
    auto G = [&](std::size_t slot) {
        const auto& s = p.slots()[slot];
        return Eigen::Map<Eigen::MatrixXd>(grad.data() + s.offset, s.rows, s.cols);
    };

    const Eigen::MatrixXd& top = cache.layers.back().h.back();
    Eigen::MatrixXd dh_top = Eigen::MatrixXd::Zero(H, B);
    for (Task task : kTasks) {
        const std::size_t ti = static_cast<std::size_t>(task);
        const double w = cfg.loss_weights[ti];
        const HeadCache& hc = cache.heads[ti];
        Eigen::MatrixXd dout(hc.out.rows(), B);
        for (Eigen::Index b = 0; b < B; ++b) {
            const EncodedTargets& tg = *targets[static_cast<std::size_t>(b)];
            if (is_class_task(task)) {
                const auto y = static_cast<Eigen::Index>(target_class(tg, task));
                const double py = hc.out(y, b);
                sum.task[ti] -= std::log(std::max(py, kLogFloor));
                if (py < kLogFloor) {
                    dout.col(b).setZero();
                } else {
                    dout.col(b) = hc.out.col(b);
                    dout(y, b) -= 1.0;
                }
            } else {
                const double diff = hc.out(0, b) - target_value(tg, task);
                sum.task[ti] += std::abs(diff);
                dout(0, b) = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            }
        }
        if (w == 0.0) continue;
        dout *= w * scale;
        G(p.head_slot(task, 2)).noalias() += dout * hc.z.transpose();
        G(p.head_slot(task, 3)).col(0) += dout.rowwise().sum();
        Eigen::MatrixXd dpre = p.tensor(p.head_slot(task, 2)).transpose() * dout;
        dpre = dpre.cwiseProduct((hc.pre.array() > 0.0).cast<double>().matrix());
        G(p.head_slot(task, 0)).noalias() += dpre * top.transpose();
        G(p.head_slot(task, 1)).col(0) += dpre.rowwise().sum();
        dh_top.noalias() += p.tensor(p.head_slot(task, 0)).transpose() * dpre;
    }

    std::vector<Eigen::MatrixXd> dh_ext(T, Eigen::MatrixXd::Zero(H, B));
    dh_ext[T - 1] = dh_top;
    for (std::size_t l = cfg.shared_layers; l-- > 0;) {
        const LayerCache& lc = cache.layers[l];
        const std::vector<Eigen::MatrixXd>& in = l == 0 ? cache.x : cache.layers[l - 1].h;
        const auto W = p.tensor(NetParams::lstm_slot(l, 0));
        const auto U = p.tensor(NetParams::lstm_slot(l, 1));
        auto dW = G(NetParams::lstm_slot(l, 0));
        auto dU = G(NetParams::lstm_slot(l, 1));
        auto db = G(NetParams::lstm_slot(l, 2));
        std::vector<Eigen::MatrixXd> dx(T);
        Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(H, B);
        Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(H, B);
        Eigen::MatrixXd da(4 * H, B);
        for (std::size_t t = T; t-- > 0;) {
            const Eigen::MatrixXd dh = dh_ext[t] + dh_next;
            const auto& i = lc.i[t];
            const auto& f = lc.f[t];
            const auto& g = lc.g[t];
            const auto& o = lc.o[t];
            const auto& tc = lc.tc[t];
            const Eigen::MatrixXd dc =
                dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix()) + dc_next;
            const Eigen::MatrixXd c_prev = t == 0 ? Eigen::MatrixXd::Zero(H, B) : lc.c[t - 1];
            const Eigen::MatrixXd h_prev = t == 0 ? Eigen::MatrixXd::Zero(H, B) : lc.h[t - 1];
            da.topRows(H) = (dc.array() * g.array() * i.array() * (1.0 - i.array())).matrix();
            da.middleRows(H, H) = (dc.array() * c_prev.array() * f.array() * (1.0 - f.array())).matrix();
            da.middleRows(2 * H, H) = (dc.array() * i.array() * (1.0 - g.array().square())).matrix();
            da.bottomRows(H) = (dh.array() * tc.array() * o.array() * (1.0 - o.array())).matrix();
            dc_next = dc.cwiseProduct(f);
            dW.noalias() += da * in[t].transpose();
            dU.noalias() += da * h_prev.transpose();
            db.col(0) += da.rowwise().sum();
            dh_next.noalias() = U.transpose() * da;
            if (l > 0) dx[t].noalias() = W.transpose() * da;
        }
        if (l > 0) dh_ext = std::move(dx);
    }
}

template <typename Fn>
void for_each_length_group(std::span<const SequenceRef> seqs, Fn&& fn) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < seqs.size(); ++i) groups[seqs[i].k].push_back(i);
    for (const auto& [k, idx] : groups) fn(idx);
}

std::vector<SequenceRef> refs_of(std::span<const TrainingSample> samples) {
    std::vector<SequenceRef> refs;
    refs.reserve(samples.size());
    for (const auto& s : samples) refs.push_back({s.events.get(), s.k});
    return refs;
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

void glorot(Eigen::Map<Eigen::MatrixXd> m, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-limit, limit);
}

Eigen::MatrixXd orthogonal(Eigen::Index n, Rng& rng) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
}

void add_scaled(LossBreakdown& acc, const LossBreakdown& x, double s) {
    acc.total += s * x.total;
    for (std::size_t t = 0; t < kTaskCount; ++t) acc.task[t] += s * x.task[t];
}

void finish_total(LossBreakdown& l, const std::array<double, kTaskCount>& w) {
    l.total = 0.0;
    for (std::size_t t = 0; t < kTaskCount; ++t) l.total += w[t] * l.task[t];
}

}  // namespace

std::string_view to_string(Task task) {
    switch (task) {
        case Task::next_activity: return "next_activity";
        case Task::next_delta: return "next_timestamp";
        case Task::outcome: return "outcome";
        case Task::cycle: return "cycle_time";
    }
    return "unknown";
}

void NetConfig::validate() const {
    if (input_dim < 1 || activity_classes < 1 || outcome_classes < 1) throw ParamError("network shape is empty");
    if (hidden_units < 1 || shared_layers < 1 || head_hidden < 1) throw ParamError("layer sizes must be at least 1");
    if (batch_size < 1) throw ParamError("batch size must be at least 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ParamError("learning rate must be >= 0");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        throw ParamError("validation fraction must lie in [0, 1)");
    }
    double sum = 0.0;
    for (double w : loss_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ParamError("loss weights must be finite and >= 0");
        sum += w;
    }
    if (sum == 0.0) throw ParamError("at least one loss weight must be positive");
}

NetConfig make_net_config(const EncoderSpec& spec, NetConfig base) {
    base.input_dim = spec.total_dim;
    base.activity_classes = spec.activity_count();
    base.outcome_classes = spec.outcome_count();
    return base;
}

NetParams::NetParams(const NetConfig& config) : config_(config) {
    config_.validate();
    const auto H = static_cast<Eigen::Index>(config_.hidden_units);
    const auto hh = static_cast<Eigen::Index>(config_.head_hidden);
    Eigen::Index offset = 0;
    auto add = [&](std::string name, Eigen::Index rows, Eigen::Index cols) {
        slots_.push_back({std::move(name), rows, cols, offset});
        offset += rows * cols;
    };
    for (std::size_t l = 0; l < config_.shared_layers; ++l) {
        const std::string p = "lstm" + std::to_string(l) + ".";
        const Eigen::Index in = l == 0 ? static_cast<Eigen::Index>(config_.input_dim) : H;
        add(p + "input_weights", 4 * H, in);
        add(p + "recurrent_weights", 4 * H, H);
        add(p + "bias", 4 * H, 1);
    }
    for (Task task : kTasks) {
        const std::string p = std::string(to_string(task)) + ".";
        add(p + "hidden_weights", hh, H);
        add(p + "hidden_bias", hh, 1);
        add(p + "output_weights", head_classes(config_, task), hh);
        add(p + "output_bias", head_classes(config_, task), 1);
    }
    values_ = Eigen::VectorXd::Zero(offset);
}

Eigen::Map<Eigen::MatrixXd> NetParams::tensor(std::size_t slot) {
    const Slot& s = slots_.at(slot);
    return {values_.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<const Eigen::MatrixXd> NetParams::tensor(std::size_t slot) const {
    const Slot& s = slots_.at(slot);
    return {values_.data() + s.offset, s.rows, s.cols};
}

NetParams init(const NetConfig& config) {
    NetParams p(config);
    Rng rng(mix_seed(config.seed, 0x1417));
    const auto H = static_cast<Eigen::Index>(config.hidden_units);
    for (std::size_t l = 0; l < config.shared_layers; ++l) {
        glorot(p.tensor(NetParams::lstm_slot(l, 0)), rng);
        auto U = p.tensor(NetParams::lstm_slot(l, 1));
        for (Eigen::Index gate = 0; gate < 4; ++gate) U.middleRows(gate * H, H) = orthogonal(H, rng);
        p.tensor(NetParams::lstm_slot(l, 2)).middleRows(H, H).setOnes();
    }
    for (Task task : kTasks) {
        glorot(p.tensor(p.head_slot(task, 0)), rng);
        glorot(p.tensor(p.head_slot(task, 2)), rng);
    }
    return p;
}

Prediction forward(const NetParams& params, const Eigen::MatrixXd& inputs) {
    if (inputs.rows() == 0) throw LengthError("cannot run the network on an empty prefix");
    const SequenceRef ref{&inputs, static_cast<std::size_t>(inputs.rows())};
    return forward(params, std::span<const SequenceRef>(&ref, 1)).front();
}

std::vector<Prediction> forward(const NetParams& params, std::span<const SequenceRef> batch) {
    std::vector<Prediction> out(batch.size());
    ForwardCache cache;
    for_each_length_group(batch, [&](const std::vector<std::size_t>& idx) {
        std::vector<SequenceRef> group;
        for (std::size_t i : idx) group.push_back(batch[i]);
        forward_group(params, group, cache);
        for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] = prediction_at(cache, static_cast<Eigen::Index>(j));
    });
    return out;
}

LossBreakdown loss(const Prediction& pred, const EncodedTargets& target, const std::array<double, kTaskCount>& weights) {
    LossBreakdown l;
    l.task[0] = -std::log(std::max(pred.next_activity(static_cast<Eigen::Index>(target.next_activity)), kLogFloor));
    l.task[1] = std::abs(pred.next_delta - target.next_delta);
    l.task[2] = -std::log(std::max(pred.outcome(static_cast<Eigen::Index>(target.outcome)), kLogFloor));
    l.task[3] = std::abs(pred.cycle - target.cycle);
    finish_total(l, weights);
    return l;
}

Gradient backward(const NetParams& params, std::span<const TrainingSample> batch) {
    if (batch.empty()) throw TrainingError("cannot compute a gradient over an empty batch");
    Gradient g;
    g.values = Eigen::VectorXd::Zero(params.values().size());
    const auto refs = refs_of(batch);
    const double scale = 1.0 / static_cast<double>(batch.size());
    ForwardCache cache;
    for_each_length_group(refs, [&](const std::vector<std::size_t>& idx) {
        std::vector<SequenceRef> group;
        std::vector<const EncodedTargets*> targets;
        for (std::size_t i : idx) {
            group.push_back(refs[i]);
            targets.push_back(&batch[i].targets);
        }
        forward_group(params, group, cache);
        backward_group(params, cache, targets, scale, g.values, g.mean_loss);
    });
    for (auto& t : g.mean_loss.task) t *= scale;
    finish_total(g.mean_loss, params.config().loss_weights);
    return g;
}

LossBreakdown mean_loss(const NetParams& params, std::span<const TrainingSample> samples) {
    LossBreakdown sum;
    if (samples.empty()) return sum;
    const auto refs = refs_of(samples);
    const auto preds = forward(params, refs);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        add_scaled(sum, loss(preds[i], samples[i].targets, params.config().loss_weights), 1.0);
    }
    for (auto& t : sum.task) t /= static_cast<double>(samples.size());
    finish_total(sum, params.config().loss_weights);
    return sum;
}

TrainingHistory train(NetParams& params, std::span<const TrainingSample> data) {
    const NetConfig& cfg = params.config();
    if (data.empty()) throw TrainingError("training set is empty");

    std::size_t cut = data.size();
    const auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(data.size())));
    if (n_val > 0) {
        cut = data.size() - n_val;
        while (cut > 0 && data[cut].group == data[cut - 1].group) --cut;
        if (cut == 0) cut = data.size();
    }
    const auto train_part = data.subspan(0, cut);
    const auto val_part = data.subspan(cut);

    std::map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < train_part.size(); ++i) buckets[train_part[i].k].push_back(i);

    Rng rng(mix_seed(cfg.seed, 0xADA));
    const double beta1 = 0.9;
    const double beta2 = 0.999;
    const double eps = 1e-8;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(params.values().size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(params.values().size());
    std::uint64_t step = 0;

    TrainingHistory history;
    Eigen::VectorXd best = params.values();
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<std::vector<std::size_t>> batches;
        for (auto& [k, idx] : buckets) {
            std::vector<std::size_t> order = idx;
            rng.shuffle(order);
            for (std::size_t s = 0; s < order.size(); s += cfg.batch_size) {
                batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(s),
                                     order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), s + cfg.batch_size)));
            }
        }
        rng.shuffle(batches);

        EpochRecord rec;
        rec.epoch = epoch;
        std::vector<TrainingSample> batch;
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            batch.clear();
            for (std::size_t i : batches[bi]) batch.push_back(train_part[i]);
            Gradient g = backward(params, batch);
            if (!std::isfinite(g.mean_loss.total) || !all_finite(g.values)) {
                std::ostringstream msg;
                msg << "training diverged at epoch " << epoch << ", batch " << bi + 1 << " (loss "
                    << g.mean_loss.total << ")";
                throw TrainingError(msg.str());
            }
            add_scaled(rec.train, g.mean_loss, static_cast<double>(batch.size()));

            ++step;
            m = beta1 * m + (1.0 - beta1) * g.values;
            v = beta2 * v + (1.0 - beta2) * g.values.cwiseAbs2();
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            params.values().array() -=
                cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        }
        for (auto& t : rec.train.task) t /= static_cast<double>(train_part.size());
        rec.train.total /= static_cast<double>(train_part.size());

        if (val_part.empty()) {
            rec.validation.total = std::numeric_limits<double>::quiet_NaN();
            rec.validation.task.fill(std::numeric_limits<double>::quiet_NaN());
            history.epochs.push_back(rec);
            history.best_epoch = epoch;
            continue;
        }
        rec.validation = mean_loss(params, val_part);
        history.epochs.push_back(rec);
        if (rec.validation.total < best_val) {
            best_val = rec.validation.total;
            best = params.values();
            history.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            history.early_stopped = true;
            break;
        }
    }
    if (!val_part.empty() && history.best_epoch > 0) params.values() = best;
    return history;
}

std::string history_csv(const TrainingHistory& history) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,train_total,train_next_activity,train_next_timestamp,train_outcome,train_cycle_time,"
           "validation_total,validation_next_activity,validation_next_timestamp,validation_outcome,"
           "validation_cycle_time\n";
    for (const auto& r : history.epochs) {
        out << r.epoch << ',' << r.train.total;
        for (double t : r.train.task) out << ',' << t;
        out << ',' << r.validation.total;
        for (double t : r.validation.task) out << ',' << t;
        out << '\n';
    }
    return out.str();
}

std::vector<TrainingSample> make_training_samples(const EncoderSpec& spec, const EventLog& log) {
    std::vector<TrainingSample> samples;
    samples.reserve(log.event_count());
    for (std::size_t ti = 0; ti < log.traces.size(); ++ti) {
        const Trace& trace = log.traces[ti];
        auto encoded = std::make_shared<const Eigen::MatrixXd>(encode_trace(spec, trace));
        for (std::size_t k = 1; k <= trace.events.size(); ++k) {
            samples.push_back({encoded, k, encode_targets(spec, make_prefix_sample(trace, k)), ti});
        }
    }
    return samples;
}

CasePrediction decode_prediction(const EncoderSpec& spec, const Prediction& pred, const Trace& partial) {
    CasePrediction cp;
    Eigen::Index a = 0;
    cp.next_activity_probability = pred.next_activity.maxCoeff(&a);
    cp.next_activity = spec.activities[static_cast<std::size_t>(a)];
    Eigen::Index o = 0;
    cp.outcome_probability = pred.outcome.maxCoeff(&o);
    cp.outcome = spec.activities[static_cast<std::size_t>(o)];
    cp.next_delta_seconds = std::max(0.0, denormalize_time(spec, pred.next_delta, TimeTarget::next_delta));
    cp.cycle_seconds = std::max(0.0, denormalize_time(spec, pred.cycle, TimeTarget::cycle));
    cp.next_timestamp = partial.events.back().timestamp + cp.next_delta_seconds;
    cp.completion_time = partial.events.front().timestamp + cp.cycle_seconds;
    return cp;
}

CasePrediction predict(const NetParams& params, const EncoderSpec& spec, const Trace& partial) {
    if (partial.events.empty()) throw LengthError("cannot predict from an empty prefix");
    return decode_prediction(spec, forward(params, encode_trace(spec, partial)), partial);
}

// Checkpoints -------------------------------------------------------------

namespace {

void write_config(BinaryWriter& w, const NetConfig& c) {
    for (std::size_t v : {c.input_dim, c.activity_classes, c.outcome_classes, c.hidden_units, c.shared_layers,
                          c.head_hidden, c.epochs, c.batch_size, c.patience}) {
        w.u64(v);
    }
    w.f64(c.learning_rate);
    w.f64(c.validation_fraction);
    w.u64(c.seed);
    for (double x : c.loss_weights) w.f64(x);
}

NetConfig read_config(BinaryReader& r) {
    NetConfig c;
    for (std::size_t* v : {&c.input_dim, &c.activity_classes, &c.outcome_classes, &c.hidden_units, &c.shared_layers,
                           &c.head_hidden, &c.epochs, &c.batch_size, &c.patience}) {
        *v = r.u64();
    }
    c.learning_rate = r.f64();
    c.validation_fraction = r.f64();
    c.seed = r.u64();
    for (double& x : c.loss_weights) x = r.f64();
    try {
        c.validate();
    } catch (const ParamError& e) {
        throw CorruptError(std::string("invalid network configuration: ") + e.what());
    }
    if (c.hidden_units > (1u << 16) || c.shared_layers > 64 || c.head_hidden > (1u << 16) ||
        c.input_dim > (1u << 24) || c.activity_classes > (1u << 24)) {
        throw CorruptError("implausible network dimensions");
    }
    return c;
}

void write_loss(BinaryWriter& w, const LossBreakdown& l) {
    w.f64(l.total);
    for (double t : l.task) w.f64(t);
}

LossBreakdown read_loss(BinaryReader& r) {
    LossBreakdown l;
    l.total = r.f64();
    for (double& t : l.task) t = r.f64();
    return l;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    BinaryWriter w;
    write_header(w, kCheckpointMagic, kCheckpointVersion);
    write_config(w, ckpt.params.config());
    w.u64(ckpt.data_fingerprint);
    const Eigen::VectorXd& v = ckpt.params.values();
    w.u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v(i));
    write_encoder_spec(w, ckpt.spec);
    w.u64(ckpt.history.best_epoch);
    w.u8(ckpt.history.early_stopped ? 1 : 0);
    w.u64(ckpt.history.epochs.size());
    for (const auto& e : ckpt.history.epochs) {
        w.u64(e.epoch);
        write_loss(w, e.train);
        write_loss(w, e.validation);
    }
    return w.bytes();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
    BinaryReader r(bytes);
    read_header(r, kCheckpointMagic, kCheckpointVersion);
    const NetConfig cfg = read_config(r);
    Checkpoint ckpt;
    ckpt.data_fingerprint = r.u64();
    ckpt.params = NetParams(cfg);
    const std::uint64_t n = r.u64();
    if (n != static_cast<std::uint64_t>(ckpt.params.values().size())) {
        throw CorruptError("parameter count does not match the network configuration");
    }
    r.need_elems(n, 8);
    for (Eigen::Index i = 0; i < ckpt.params.values().size(); ++i) ckpt.params.values()(i) = r.f64();
    ckpt.spec = read_encoder_spec(r);
    if (ckpt.spec.total_dim != cfg.input_dim || ckpt.spec.activity_count() != cfg.activity_classes) {
        throw CorruptError("encoder and network shapes disagree");
    }
    ckpt.history.best_epoch = r.u64();
    ckpt.history.early_stopped = r.u8() != 0;
    const std::uint64_t epochs = r.u64();
    r.need_elems(epochs, 88);
    for (std::uint64_t i = 0; i < epochs; ++i) {
        EpochRecord e;
        e.epoch = r.u64();
        e.train = read_loss(r);
        e.validation = read_loss(r);
        ckpt.history.epochs.push_back(e);
    }
    if (!r.at_end()) throw CorruptError("trailing bytes after checkpoint");
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) { write_file(path, serialize_checkpoint(ckpt)); }

Checkpoint load_checkpoint(const std::string& path) { return deserialize_checkpoint(read_file(path)); }

}  // namespace textpm
