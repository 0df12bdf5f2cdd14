#ifndef STYVAR_SYNTHGEN_HPP
#define STYVAR_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "styvar/corpus.hpp"

namespace styvar::synthgen {

// Ground-truth-known corpus generator. A latent per-document style value
// maps monotonically to a Zipf exponent, so vocabulary richness (and with
// it Simpson/TTR/entropy) tracks the latent variance.
struct SynthSpec {
  std::size_t docs_per_month = 50;
  std::size_t months = 70;
  std::size_t onset_index = 35;   // first month with the post regime
  corpus::Date start{2018, 1, 1};
  double pre_variance = 1.0;      // latent style variance before onset
  double post_variance = 1.0;     // from onset onward
  double rho = 0.3;               // AR(1) of the month-level noise
  double marker_p = 0.5;          // per-document trait marker probability
  double strip_rate = 1.0;        // chance a rewrite drops each marker
  std::size_t authors = 400;      // trait corpus size
  std::size_t doc_tokens = 150;
  std::uint64_t seed = 1;
};

void validate(const SynthSpec& spec);

std::vector<corpus::Document> generate_shock_corpus(const SynthSpec& spec);

struct TraitCorpus {
  std::vector<corpus::Document> originals;
  std::vector<corpus::Document> rewrites;
  std::string trait;  // label key carrying the class
};

TraitCorpus generate_trait_corpus(const SynthSpec& spec);

// x is an exogenous driver (iid standard normal), y responds to x lagged by
// `lag` steps plus fresh noise; coupling 0 gives an independent pair.
struct LaggedPair {
  std::vector<double> x;
  std::vector<double> y;
};

LaggedPair generate_lagged_series(std::uint64_t seed, std::size_t length,
                                  std::size_t lag, double coupling,
                                  double noise_sd);

std::string to_jsonl(const std::vector<corpus::Document>& docs);
void write_jsonl(const std::string& path, const std::vector<corpus::Document>& docs);

}  // namespace styvar::synthgen

#endif
