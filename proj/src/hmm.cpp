#include "hug/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace hug::hmm {

namespace {

void normalise(double* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    for (std::size_t i = 0; i < n; ++i) v[i] /= s;
}

void check_sequence(const HmmModel& m, std::span<const Symbol> seq) {
    if (seq.empty()) throw DataError("empty observation sequence");
    for (Symbol s : seq) {
        if (s >= m.alphabet)
            throw DataError("symbol " + std::to_string(s) + " outside alphabet of " + std::to_string(m.alphabet));
    }
}

// Scaled forward pass. alpha is T x K, scale holds c_t; returns sum log c_t.
double forward_scaled(const HmmModel& m, std::span<const Symbol> seq, std::vector<double>& alpha,
                      std::vector<double>& scale) {
    const std::size_t K = m.states, T = seq.size();
    alpha.assign(T * K, 0.0);
    scale.assign(T, 0.0);
    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        double* a = alpha.data() + t * K;
        if (t == 0) {
            for (std::size_t j = 0; j < K; ++j) a[j] = m.pi[j] * m.phi(j, seq[0]);
        } else {
            const double* prev = alpha.data() + (t - 1) * K;
            for (std::size_t j = 0; j < K; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < K; ++i) s += prev[i] * m.A(i, j);
                a[j] = s * m.phi(j, seq[t]);
            }
        }
        double c = 0.0;
        for (std::size_t j = 0; j < K; ++j) c += a[j];
        if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j) a[j] /= c;
        scale[t] = c;
        ll += std::log(c);
    }
    return ll;
}

double log_prior_term(const HmmModel& m, double smoothing) {
    if (smoothing <= 0.0) return 0.0;
    double s = 0.0;
    for (double p : m.pi) s += std::log(p);
    for (double p : m.A.data()) s += std::log(p);
    for (double p : m.phi.data()) s += std::log(p);
    return smoothing * s;
}

}  // namespace

HmmModel init_model(std::size_t states, std::size_t alphabet, std::uint64_t seed, InitBias bias) {
    if (states == 0) throw DataError("HMM needs at least one hidden state");
    if (alphabet == 0) throw DataError("HMM needs a nonempty alphabet");
    HmmModel m;
    m.states = states;
    m.alphabet = alphabet;
    m.pi.assign(states, 1.0 / static_cast<double>(states));
    m.A = Matrix<double>(states, states, 1.0);
    if (bias == InitBias::left_to_right) {
        for (std::size_t i = 0; i < states; ++i) {
            m.A(i, i) *= 3.0;
            if (i + 1 < states) m.A(i, i + 1) *= 3.0;
        }
    }
    for (std::size_t i = 0; i < states; ++i) normalise(m.A.row(i), states);

    std::mt19937_64 rng(mix_seed(seed, 0x4D4D));
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    m.phi = Matrix<double>(states, alphabet);
    for (std::size_t i = 0; i < states; ++i) {
        for (std::size_t k = 0; k < alphabet; ++k) m.phi(i, k) = 1.0 + jitter(rng);
        normalise(m.phi.row(i), alphabet);
    }
    return m;
}

double stochastic_error(const HmmModel& m) {
    auto row_err = [](const double* v, std::size_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return std::abs(s - 1.0);
    };
    double e = row_err(m.pi.data(), m.pi.size());
    for (std::size_t i = 0; i < m.states; ++i) {
        e = std::max(e, row_err(m.A.row(i), m.states));
        e = std::max(e, row_err(m.phi.row(i), m.alphabet));
    }
    return e;
}

double forward_loglik(const HmmModel& model, std::span<const Symbol> seq) {
    check_sequence(model, seq);
    std::vector<double> alpha, scale;
    return forward_scaled(model, seq, alpha, scale);
}

TrainResult baum_welch(std::span<const std::vector<Symbol>> sequences, std::size_t alphabet,
                       const TrainOptions& options) {
    if (sequences.empty()) throw DataError("Baum-Welch needs at least one sequence");
    if (options.states < 1) throw DataError("HMM needs at least one hidden state");
    if (options.smoothing < 0.0) throw DataError("smoothing must be non-negative");

    TrainResult result;
    HmmModel m = init_model(options.states, alphabet, options.seed, options.bias);
    for (const auto& s : sequences) check_sequence(m, s);
    const std::size_t K = m.states, V = m.alphabet;
    const double eps = options.smoothing;

    std::vector<double> alpha, scale, beta, next;
    std::vector<double> pi_acc(K), a_acc(K * K), phi_acc(K * V);

    for (std::size_t it = 0; it <= options.iterations; ++it) {
        std::fill(pi_acc.begin(), pi_acc.end(), 0.0);
        std::fill(a_acc.begin(), a_acc.end(), 0.0);
        std::fill(phi_acc.begin(), phi_acc.end(), 0.0);
        double total = 0.0;
        for (const auto& seq : sequences) {
            const std::size_t T = seq.size();
            const double ll = forward_scaled(m, seq, alpha, scale);
            total += ll;
            if (it == options.iterations || !std::isfinite(ll)) continue;  // final pass only scores

            beta.assign(T * K, 0.0);
            for (std::size_t j = 0; j < K; ++j) beta[(T - 1) * K + j] = 1.0;
            next.resize(K);
            for (std::size_t t = T - 1; t-- > 0;) {
                const double* bn = beta.data() + (t + 1) * K;
                for (std::size_t j = 0; j < K; ++j) next[j] = m.phi(j, seq[t + 1]) * bn[j];
                double* b = beta.data() + t * K;
                for (std::size_t i = 0; i < K; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < K; ++j) s += m.A(i, j) * next[j];
                    b[i] = s / scale[t + 1];
                }
            }
            for (std::size_t t = 0; t < T; ++t) {
                const double* a = alpha.data() + t * K;
                const double* b = beta.data() + t * K;
                for (std::size_t i = 0; i < K; ++i) {
                    const double g = a[i] * b[i];
                    if (t == 0) pi_acc[i] += g;
                    phi_acc[i * V + seq[t]] += g;
                }
                if (t + 1 == T) continue;
                const double* bn = beta.data() + (t + 1) * K;
                for (std::size_t j = 0; j < K; ++j) next[j] = m.phi(j, seq[t + 1]) * bn[j] / scale[t + 1];
                for (std::size_t i = 0; i < K; ++i) {
                    for (std::size_t j = 0; j < K; ++j) a_acc[i * K + j] += a[i] * m.A(i, j) * next[j];
                }
            }
        }
        result.loglik_trace.push_back(total);
        result.objective_trace.push_back(total + log_prior_term(m, eps));
        if (it == options.iterations) break;

        for (std::size_t i = 0; i < K; ++i) m.pi[i] = pi_acc[i] + eps;
        normalise(m.pi.data(), K);
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) m.A(i, j) = a_acc[i * K + j] + eps;
            normalise(m.A.row(i), K);
            for (std::size_t k = 0; k < V; ++k) m.phi(i, k) = phi_acc[i * V + k] + eps;
            normalise(m.phi.row(i), V);
        }
    }
    result.model = std::move(m);
    return result;
}

std::vector<Symbol> sample(const HmmModel& model, std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto draw = [&](const double* p, std::size_t n) {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += p[i];
            if (u < acc) return i;
        }
        return n - 1;
    };
    std::vector<Symbol> out;
    out.reserve(length);
    std::size_t z = draw(model.pi.data(), model.states);
    for (std::size_t t = 0; t < length; ++t) {
        if (t > 0) z = draw(model.A.row(z), model.states);
        out.push_back(static_cast<Symbol>(draw(model.phi.row(z), model.alphabet)));
    }
    return out;
}

std::vector<double> uniform_priors(std::size_t classes) {
    return std::vector<double>(classes, 1.0 / static_cast<double>(classes));
}

std::vector<double> no_finger_weighted_priors(std::size_t classes, double weight) {
    if (classes < 2) return uniform_priors(classes);
    std::vector<double> p(classes, (1.0 - weight) / static_cast<double>(classes - 1));
    p[class_index(GestureClass::no_finger)] = weight;
    return p;
}

Classification posterior_from_loglik(std::span<const double> loglik, std::span<const double> priors) {
    if (loglik.size() != priors.size() || loglik.empty()) throw DataError("class count mismatch");
    Classification c;
    c.loglik.assign(loglik.begin(), loglik.end());
    std::vector<double> joint(loglik.size());
    for (std::size_t n = 0; n < loglik.size(); ++n) joint[n] = loglik[n] + std::log(priors[n]);
    std::size_t best = 0;
    for (std::size_t n = 1; n < joint.size(); ++n) {
        if (joint[n] > joint[best]) best = n;
    }
    const double top = joint[best];
    c.posterior.resize(joint.size());
    if (!std::isfinite(top)) {
        // Every class assigns zero probability; fall back to the priors.
        c.posterior.assign(priors.begin(), priors.end());
        best = static_cast<std::size_t>(std::max_element(priors.begin(), priors.end()) - priors.begin());
    } else {
        double z = 0.0;
        for (std::size_t n = 0; n < joint.size(); ++n) {
            c.posterior[n] = std::exp(joint[n] - top);
            z += c.posterior[n];
        }
        for (auto& p : c.posterior) p /= z;
    }
    c.map_index = best;
    c.map_class = class_from_index(best);
    return c;
}

Classification classify(const ClassifierBank& bank, std::span<const Symbol> seq, std::uint64_t dictionary_hash) {
    if (dictionary_hash != bank.dictionary_hash) throw DataError("dictionary hash does not match the model bank");
    std::vector<double> ll(bank.models.size());
    for (std::size_t n = 0; n < bank.models.size(); ++n) ll[n] = forward_loglik(bank.models[n], seq);
    return posterior_from_loglik(ll, bank.priors);
}

}  // namespace hug::hmm
