#include "octseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

namespace {

const std::vector<double> kDefaultGaps{40, 40, 35, 35, 40, 35, 35, 40};
const std::vector<double> kDefaultAmplitudes{10, 9, 8, 8, 7, 7, 6, 6, 6};
const std::vector<double> kDefaultPeriods{800, 780, 760, 740, 720, 700, 690, 680, 670};
const std::vector<double> kDefaultIntensities{0.05, 0.65, 0.35, 0.70, 0.30,
                                              0.65, 0.25, 0.60, 0.95, 0.50};

std::vector<double> centred_depths(const std::vector<double>& gaps, int height) {
    std::vector<double> d(gaps.size() + 1, 0.0);
    for (std::size_t i = 0; i < gaps.size(); ++i) d[i + 1] = d[i] + gaps[i];
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    const double centre = 0.5 * (height - 1);
    for (double& v : d) v += centre - mean;
    return d;
}

double uniform(std::mt19937_64& rng, double half_width) {
    return half_width * (2.0 * canonical(rng) - 1.0);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double PhantomSpec::boundary_row(std::size_t k, double x) const {
    return depths[k] + amplitudes[k] * std::sin(2.0 * std::numbers::pi * x / periods[k] + phases[k]);
}

void PhantomSpec::validate() const {
    if (width < 2 || height < 2) throw SpecError("phantom must be at least 2x2 pixels");
    const std::size_t n = depths.size();
    if (n == 0) throw SpecError("phantom needs at least one boundary");
    if (amplitudes.size() != n || periods.size() != n || phases.size() != n) {
        throw SpecError("per-boundary parameter lists differ in length");
    }
    if (intensities.size() != n + 1) {
        throw SpecError("need " + std::to_string(n + 1) + " region intensities, got " +
                        std::to_string(intensities.size()));
    }
    for (double v : intensities) {
        if (!(v >= 0.0 && v <= 1.0)) throw SpecError("region intensity outside [0, 1]");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(depths[k]) || !std::isfinite(amplitudes[k]) ||
            !std::isfinite(phases[k]) || !(periods[k] > 0.0)) {
            throw SpecError("boundary " + std::to_string(k) + " has invalid parameters");
        }
    }
    if (!(speckle_variance >= 0.0) || !std::isfinite(speckle_variance)) {
        throw SpecError("speckle variance must be >= 0");
    }
    for (int x = 0; x < width; ++x) {
        for (std::size_t k = 1; k < n; ++k) {
            const double gap = boundary_row(k, x) - boundary_row(k - 1, x);
            if (gap < 2.0) {
                throw SpecError("boundaries " + std::to_string(k - 1) + " and " +
                                std::to_string(k) + " are " + std::to_string(gap) +
                                " px apart at column " + std::to_string(x));
            }
        }
    }
}

PhantomSpec default_phantom_spec(int width, int height) {
    PhantomSpec spec;
    spec.width = width;
    spec.height = height;
    spec.depths = centred_depths(kDefaultGaps, height);
    spec.amplitudes = kDefaultAmplitudes;
    spec.periods = kDefaultPeriods;
    spec.phases.resize(9);
    for (std::size_t k = 0; k < 9; ++k) spec.phases[k] = 1.2 * static_cast<double>(k) / 8.0;
    spec.intensities = kDefaultIntensities;
    return spec;
}

PhantomSpec tall_phantom_spec() {
    PhantomSpec spec = default_phantom_spec(512, 1024);
    spec.depths = centred_depths(std::vector<double>(8, 95.0), 1024);
    return spec;
}

Phantom generate(const PhantomSpec& spec) {
    spec.validate();
    const std::size_t n = spec.boundary_count();
    BoundaryTruth truth;
    truth.width = spec.width;
    truth.rows.assign(n, std::vector<double>(static_cast<std::size_t>(spec.width)));
    for (std::size_t k = 0; k < n; ++k) {
        for (int x = 0; x < spec.width; ++x) truth.rows[k][x] = spec.boundary_row(k, x);
    }

    std::vector<double> pixels(static_cast<std::size_t>(spec.width) * spec.height);
    for (int x = 0; x < spec.width; ++x) {
        std::size_t region = 0;
        for (int y = 0; y < spec.height; ++y) {
            while (region < n && y >= truth.rows[region][x]) ++region;
            pixels[static_cast<std::size_t>(y) * spec.width + x] = spec.intensities[region];
        }
    }
    GrayImage clean(spec.width, spec.height, std::move(pixels));
    if (spec.speckle_variance > 0.0) {
        return {apply_speckle(clean, spec.speckle_variance, spec.seed), std::move(truth)};
    }
    return {std::move(clean), std::move(truth)};
}

GrayImage apply_speckle(const GrayImage& image, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) throw InputError("speckle variance must be >= 0");
    std::mt19937_64 rng(seed);
    const double half = std::sqrt(3.0 * variance);
    std::vector<double> out = image.pixels();
    for (double& v : out) {
        const double noise = uniform(rng, half);
        v = std::clamp(v + noise * v, 0.0, 1.0);
    }
    return GrayImage(image.width(), image.height(), std::move(out));
}

PhantomSpec sample_spec(const PhantomFamily& family, std::mt19937_64& rng) {
    PhantomSpec spec = family.base;
    const std::size_t n = spec.boundary_count();
    const double shift = uniform(rng, family.depth_shift);
    const double scale = 1.0 + uniform(rng, family.thickness_scale);
    const double tilt = uniform(rng, family.thickness_tilt);
    const double amp = 1.0 + uniform(rng, family.amplitude_scale);

    std::vector<double> depths(n);
    depths[0] = family.base.depths[0] + shift;
    for (std::size_t k = 1; k < n; ++k) {
        const double w = n > 2 ? -1.0 + 2.0 * static_cast<double>(k - 1) / (n - 2) : 0.0;
        const double gap = family.base.depths[k] - family.base.depths[k - 1];
        depths[k] = depths[k - 1] + gap * scale * (1.0 + tilt * w);
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (family.depth_jitter > 0.0) depths[k] += uniform(rng, family.depth_jitter);
        spec.amplitudes[k] *= amp;
    }
    spec.depths = std::move(depths);
    spec.seed = rng();
    return spec;
}

PhantomSpec family_member_spec(const PhantomFamily& family, std::uint64_t seed,
                               std::size_t index) {
    std::mt19937_64 rng(derived_seed(seed, index));
    return sample_spec(family, rng);
}

OctShape shape_from_truth(const BoundaryTruth& truth, std::size_t points_per_boundary) {
    std::vector<OpenContour> contours;
    contours.reserve(truth.rows.size());
    for (const auto& row : truth.rows) {
        contours.push_back(resample_uniform(column_points(row), points_per_boundary));
    }
    return OctShape::from_contours(contours);
}

TrainingSet synth_training_set(const PhantomFamily& family, std::size_t count,
                               std::uint64_t seed, std::size_t points_per_boundary) {
    if (count < 2) throw InputError("training set needs at least 2 phantoms");
    TrainingSet set;
    for (std::size_t i = 0; i < count; ++i) {
        PhantomSpec spec = family_member_spec(family, seed, i);
        Phantom phantom = generate(spec);
        set.shapes.push_back(shape_from_truth(phantom.truth, points_per_boundary));
        set.specs.push_back(std::move(spec));
        set.phantoms.push_back(std::move(phantom));
    }
    return set;
}

}  // namespace octseg
