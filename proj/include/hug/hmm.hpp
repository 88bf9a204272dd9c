#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hug/common.hpp"

namespace hug::hmm {

using Symbol = std::uint32_t;

/// Discrete-emission HMM: initial distribution pi (K), transitions A (K x K),
/// emissions phi (K x alphabet).
struct HmmModel {
    std::size_t states = 0;
    std::size_t alphabet = 0;
    std::vector<double> pi;
    Matrix<double> A;
    Matrix<double> phi;
    GestureClass gesture = GestureClass::no_finger;
    std::uint64_t dictionary_hash = 0;

    bool operator==(const HmmModel&) const = default;
};

enum class InitBias {
    left_to_right,  // A[i][i] and A[i][i+1] weighted x3 before normalising
    uniform,
};

/// Throws DataError when K or the alphabet is 0.
HmmModel init_model(std::size_t states, std::size_t alphabet, std::uint64_t seed,
                    InitBias bias = InitBias::left_to_right);

/// Largest deviation of any stochastic row (pi, rows of A, rows of phi) from 1.
double stochastic_error(const HmmModel& model);

/// log p(S | model) by the scaled forward recursion. Throws DataError on an
/// empty sequence or an out-of-range symbol.
double forward_loglik(const HmmModel& model, std::span<const Symbol> seq);

struct TrainOptions {
    std::size_t states = 6;
    std::size_t iterations = 10;
    double smoothing = 1e-3;  // pseudo-count added to every expected count
    std::uint64_t seed = 0;
    InitBias bias = InitBias::left_to_right;
};

struct TrainResult {
    HmmModel model;
    /// Total log-likelihood of the corpus under the initial model and after
    /// each iteration (iterations + 1 entries).
    std::vector<double> loglik_trace;
    /// Same, plus the smoothing pseudo-counts' log-prior term: the quantity
    /// smoothed EM is guaranteed not to decrease.
    std::vector<double> objective_trace;
};

/// Multi-sequence Baum-Welch. Throws DataError on an empty corpus, an empty
/// sequence, K < 1 or an out-of-range symbol.
TrainResult baum_welch(std::span<const std::vector<Symbol>> sequences, std::size_t alphabet,
                       const TrainOptions& options);

/// Draws a sequence from the model.
std::vector<Symbol> sample(const HmmModel& model, std::size_t length, std::uint64_t seed);

/// One model per class plus class priors.
struct ClassifierBank {
    std::vector<HmmModel> models;
    std::vector<double> priors;
    std::uint64_t dictionary_hash = 0;
    std::size_t alphabet = 0;
    std::size_t iterations = 0;
    double smoothing = 0.0;
    std::uint64_t seed = 0;
    std::string fold;  // held-out subject, or "all"

    bool operator==(const ClassifierBank&) const = default;
};

std::vector<double> uniform_priors(std::size_t classes);
/// p(no-finger) = weight, the rest uniform.
std::vector<double> no_finger_weighted_priors(std::size_t classes, double weight = 0.5);

struct Classification {
    std::vector<double> loglik;     // log p(S | C = n)
    std::vector<double> posterior;  // p(C = n | S)
    std::size_t map_index = 0;
    GestureClass map_class = GestureClass::no_finger;
};

/// Posterior over classes via log-sum-exp; ties go to the lowest index.
/// Throws DataError when `dictionary_hash` differs from the bank's.
Classification classify(const ClassifierBank& bank, std::span<const Symbol> seq, std::uint64_t dictionary_hash);

/// Posterior from precomputed class log-likelihoods.
Classification posterior_from_loglik(std::span<const double> loglik, std::span<const double> priors);

}  // namespace hug::hmm
