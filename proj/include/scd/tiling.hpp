//! \file tiling.hpp
//! \brief Layer stacking, point-set extraction, and symmetry detection.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scd/geometry.hpp"

namespace scd
{
//---------------------------------------------------------------------------//
/*!
 * Slides between consecutive layers.
 *
 * Layer m+1 sits on layer m displaced horizontally by
 *   R^m (lambda (b - a) + t_m a),
 * where the first term is the canonical seating of the ridges of layer m+1 in
 * the valleys of layer m and t_m (in units of |a|) slides along the shared
 * ridge direction R^m a = R^(m+1) b. Every representable sequence therefore
 * stacks into a valid tiling; t == 0 everywhere reproduces the plain
 * screw-stacked tiling.
 */
struct ShiftSequence
{
    enum class Kind
    {
        zero,
        periodic,
        random,
        explicit_list
    };

    Kind kind{Kind::zero};
    std::vector<double> slides;  //!< periodic pattern or explicit values
    int first_layer{0};  //!< explicit: layer index of slides[0]
    std::uint64_t seed{0};
    //! Restrict slides to integers.
    bool danzer{false};

    static ShiftSequence zero();
    static ShiftSequence periodic(std::vector<double> pattern);
    static ShiftSequence random(std::uint64_t seed, bool danzer = false);
    static ShiftSequence explicit_list(std::vector<double> values, int first_layer = 0);

    //! t_m. Explicit lists are zero outside their range.
    double slide(int m) const;
    //! Minimal period of the slide pattern for zero/periodic sequences.
    std::optional<int> period() const;
    void validate() const;
};

char const* to_string(ShiftSequence::Kind k);

struct TilingConfig
{
    TileParams params;
    ShiftSequence shifts;
    //! Defaults to the rhomb center (a + b) / 2.
    std::optional<Vec3> reference_point;
    //! Declared repetitivity; it cannot be verified from finite data.
    bool repetitive{false};

    Vec3 z() const;
    void validate() const;
};

//! One layer: reference points offset + R^m (i a + j b).
struct Layer
{
    int m{0};
    Vec2 shift;  //!< horizontal stacking shift of the layer
    Vec2 basis0;  //!< R^m a
    Vec2 basis1;  //!< R^m b
    Vec3 offset;  //!< m (0,0,c3) + shift + R^m z
    Rotation3 rotation;
};

//! Horizontal stacking shift of every layer in [m_lo, m_hi]; shift(0) = 0.
std::vector<Vec2> layer_shifts(TilingConfig const& config, int m_lo, int m_hi);

//! Layer m with explicit horizontal shift v and reference point z.
Layer build_layer(TileParams const& params, int m, Vec2 shift, Vec3 z);

std::vector<Layer> build_layers(TilingConfig const& config, int m_lo, int m_hi);

//---------------------------------------------------------------------------//
struct PointCloud
{
    std::vector<Vec3> points;
    std::vector<int> layer;
    double r{0};  //!< side of the half-open cube [-r/2, r/2)^3
    std::vector<std::pair<int, std::size_t>> per_layer_counts;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    //! Rebuild per_layer_counts from the layer column.
    void recount();
};

//! Reference points of the tiling inside [-r/2, r/2)^3, layer-major then by (i, j).
PointCloud extract_points(TilingConfig const& config, double r);

//! Points of the given layers inside [-r/2, r/2)^3, in the given layer order.
PointCloud extract_layer_points(std::span<Layer const> layers, double r);

//---------------------------------------------------------------------------//
struct PackingOptions
{
    std::size_t sample_count{10000};
    std::uint64_t seed{1};
    //! Half-width of the sampled box; 0 picks 2 max(a_len, c3).
    double half_width{0};
};

struct PackingReport
{
    std::size_t samples{0};
    std::size_t uncovered{0};  //!< inside the slab but in no tile
    std::size_t overlaps{0};  //!< in the interior of two or more tiles
    std::size_t out_of_coverage{0};  //!< outside the generated slab
    std::vector<Vec3> violations;  //!< first few offending samples

    bool ok() const { return uncovered == 0 && overlaps == 0; }
};

PackingReport validate_packing(TilingConfig const& config, PackingOptions const& opts = {});

//! Spot-check a finite slab given explicitly as layers.
PackingReport validate_packing(TileParams const& params, std::span<Layer const> layers,
                               PackingOptions const& opts = {});

//---------------------------------------------------------------------------//
enum class Decision
{
    no,
    yes,
    undecidable
};

char const* to_string(Decision d);

struct ScrewCheck
{
    Decision status{Decision::undecidable};
    //! Layers checked on each side when not decided structurally.
    int horizon{0};
    //! Horizontal part tau of the screw map x -> R^m x + m (0,0,c3) + tau.
    Vec2 translation;
};

ScrewCheck detect_screw_symmetry(TilingConfig const& config, int m);

struct FullPeriodicity
{
    bool periodic{false};
    int k{0};  //!< layers per vertical period, R^k = id
    //! Two horizontal periods and the period (tau, k c3).
    std::array<Vec3, 3> periods{};
    std::string reason;
};

FullPeriodicity detect_full_periodicity(TilingConfig const& config);

enum class Repetitivity
{
    satisfies_necessary,
    violates,
    ambiguous
};

char const* to_string(Repetitivity r);

struct RepetitivityReport
{
    Repetitivity verdict{Repetitivity::violates};
    //! cos phi = p/q when known or suspected.
    std::optional<std::pair<std::int64_t, std::int64_t>> cos_pq;
};

//! Necessary condition for a repetitive tiling: cos phi rational.
RepetitivityReport repetitivity_condition(AngleSpec const& angle);

}  // namespace scd
