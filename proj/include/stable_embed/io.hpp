#pragma once

#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stable_embed/manifolds.hpp"

namespace stable_embed::io {

// Shortest decimal string that round-trips the exact double value.
std::string format_double(double x);

std::string format_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Headerless CSV, one vector per row, columns re0,im0,re1,im1,...
void write_vectors_csv(const std::string& path,
                       const std::vector<std::vector<std::complex<double>>>& rows);
std::vector<std::vector<std::complex<double>>> read_vectors_csv(const std::string& path);

// Header theta1,...,thetaD,re1,im1,...,reN,imN; one chord per row.
void write_chords_csv(const std::string& path, const manifolds::ChordSet& chords);

// Same column layout as write_chords_csv but rows are manifold points, not
// chords: parameters first, then the interleaved complex coordinates.
manifolds::ManifoldModel read_grid_model_csv(const std::string& path, const std::string& name);

}  // namespace stable_embed::io
