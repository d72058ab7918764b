#ifndef YMMF_MC_HPP
#define YMMF_MC_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ymmf/groups.hpp"
#include "ymmf/planar.hpp"

namespace ymmf {

/** One draw of the generator holonomies of a lasso basis. */
struct HolonomySample {
    std::vector<Matrix> generators;
};

/** Independent RNG stream for (seed, sample index, generator index). */
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t sample, std::uint64_t generator);

/** Face generators follow the heat kernel at their area, handles are Haar distributed. */
HolonomySample sample_ym_one_boundary(const CombinatorialMap& m, const LassoBasis& basis, const AreaVector& a,
                                      const GroupSpec& g, int steps, std::uint64_t seed, std::uint64_t sample);

/** Holonomy of a word: h_{uv} = h_v h_u. */
Matrix holonomy(const HolonomySample& s, const GeneratorWord& w);

/** Worker count from YMMF_WORKERS, else the hardware concurrency. */
int default_workers();

struct McConfig {
    int samples = 1000;
    std::uint64_t seed = 1;
    int workers = 0;
    /** Heat-kernel steps per face; 0 selects the default for the face area. */
    int steps = 0;
};

struct WilsonEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    double variance = 0.0;
    int samples = 0;
};

/** Estimates of E Re tr(h_l) for several loops from the same samples. */
std::vector<WilsonEstimate> wilson_estimates(const CombinatorialMap& m, const std::vector<LoopPath>& loops,
                                             const LassoBasis& basis, const AreaVector& a, const GroupSpec& g,
                                             const McConfig& cfg);

WilsonEstimate wilson_estimate(const CombinatorialMap& m, const LoopPath& l, const LassoBasis& basis,
                               const AreaVector& a, const GroupSpec& g, const McConfig& cfg);

/** Pairwise (cascade) summation. */
double pairwise_sum(const double* x, std::size_t n);

}  // namespace ymmf

#endif
