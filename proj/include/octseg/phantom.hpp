#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "octseg/image.hpp"
#include "octseg/metrics.hpp"
#include "octseg/shape_model.hpp"

namespace octseg {

/// Layered image description. Boundary k at column x lies at row
/// depths[k] + amplitudes[k] * sin(2 pi x / periods[k] + phases[k]).
struct PhantomSpec {
    int width = 512;
    int height = 512;
    std::vector<double> depths;
    std::vector<double> amplitudes;
    std::vector<double> periods;
    std::vector<double> phases;
    std::vector<double> intensities;  // one per region, boundaries + 1
    double speckle_variance = 0.8;
    std::uint64_t seed = 0;

    std::size_t boundary_count() const noexcept { return depths.size(); }
    double boundary_row(std::size_t k, double x) const;

    /// Throws SpecError when a field is inconsistent or two boundaries come
    /// closer than 2 px at some column.
    void validate() const;
};

/// Nine sinusoidal boundaries centred vertically in the image.
PhantomSpec default_phantom_spec(int width = 512, int height = 512);

/// 512 x 1024 variant with 95 px layers, for wide-band initialization tests.
PhantomSpec tall_phantom_spec();

struct Phantom {
    GrayImage image;
    BoundaryTruth truth;  // noise free
};

Phantom generate(const PhantomSpec& spec);

/// J = I + n I with n uniform on [-sqrt(3v), sqrt(3v)], clipped to [0, 1].
GrayImage apply_speckle(const GrayImage& image, double variance, std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double canonical(std::mt19937_64& rng);

/// Ranges of the training-family perturbations, all symmetric around 0.
struct PhantomFamily {
    PhantomSpec base = default_phantom_spec();
    double depth_shift = 8.0;       // px, shared by all boundaries
    double thickness_scale = 0.04;  // relative change of every layer
    double thickness_tilt = 0.04;   // relative, inner vs outer layers
    double amplitude_scale = 0.5;   // relative, shared
    double depth_jitter = 0.0;      // px, per boundary
};

PhantomSpec sample_spec(const PhantomFamily& family, std::mt19937_64& rng);

/// Spec of member `index` of a seeded family; members are independent of
/// how many others are drawn.
PhantomSpec family_member_spec(const PhantomFamily& family, std::uint64_t seed,
                               std::size_t index);

/// Resamples each full-width truth boundary to `points_per_boundary`
/// equidistant points and concatenates them.
OctShape shape_from_truth(const BoundaryTruth& truth, std::size_t points_per_boundary);

struct TrainingSet {
    std::vector<PhantomSpec> specs;
    std::vector<Phantom> phantoms;
    std::vector<OctShape> shapes;
};

TrainingSet synth_training_set(const PhantomFamily& family, std::size_t count,
                               std::uint64_t seed, std::size_t points_per_boundary = 40);

}  // namespace octseg
