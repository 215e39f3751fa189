//! \file io.hpp
//! \brief File formats: JSON configs and reports, XYZ clouds, CSV spectra, OBJ meshes.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "scd/diffraction.hpp"
#include "scd/lattice.hpp"
#include "scd/tiling.hpp"

namespace scd
{
using nlohmann::json;

inline constexpr int schema_version = 1;

//! Malformed input; the message names the offending field or line.
class SchemaError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! File could not be opened, read, or written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Shortest text with 17 significant digits, round-trip exact.
std::string format_double(double v);

//---------------------------------------------------------------------------//
// JSON
//---------------------------------------------------------------------------//
json to_json(AngleSpec const& a);
json to_json(TileParams const& p);
json to_json(ShiftSequence const& s);
json to_json(TilingConfig const& c);
json to_json(PointCloud const& c);
json to_json(AperiodicityCertificate const& c);
json to_json(CoincidenceResult const& r);
json to_json(Prediction const& p);
json to_json(SpectralClass const& s);
json to_json(FullPeriodicity const& f);
json to_json(PeriodicSpectrum const& s, std::size_t max_peaks);

AngleSpec angle_from_json(json const& j, std::string const& path = "angle");
TileParams params_from_json(json const& j, std::string const& path = "params");
ShiftSequence shifts_from_json(json const& j, std::string const& path = "shifts");
TilingConfig config_from_json(json const& j);
PointCloud cloud_from_json(json const& j);

json read_json_file(std::string const& path);
void write_text_file(std::string const& path, std::string const& text);

TilingConfig read_config(std::string const& path);

//---------------------------------------------------------------------------//
// Point clouds
//---------------------------------------------------------------------------//
//! count line, "r=<r> columns=element,x,y,z,layer", then "X x y z m" rows.
void write_xyz(std::ostream& os, PointCloud const& cloud);
PointCloud read_xyz(std::istream& is);

//! Dispatch on extension: .json or .xyz.
void save_cloud(std::string const& path, PointCloud const& cloud);
PointCloud load_cloud(std::string const& path);

//---------------------------------------------------------------------------//
// CSV and OBJ
//---------------------------------------------------------------------------//
void write_spectrum_csv(std::ostream& os, std::span<SpectrumSample const> samples);
void write_profile_csv(std::ostream& os, ShellProfile const& prof);
void write_obj(std::ostream& os, TileMesh const& mesh);

}  // namespace scd
