#pragma once

// JSON documents for spectra and coefficients. Complex numbers are [re, im]
// pairs; every parser rejects unknown fields. Numbers are written in
// shortest round-trip form and keys are sorted, so output is byte-stable.

#include <filesystem>
#include <json.hpp>

#include "rank1/spectral_model.hpp"

namespace rank1::json_io {

using json = nlohmann::json;

json to_json(const BaseSpectrum& spec);
json to_json(const PerturbationCoefficients& coeffs);
json to_json(const TargetSpectrum& target);
json to_json(const PerturbedSpectrum& spectrum);
json to_json(cplx z);

BaseSpectrum base_from_json(const json& doc);
PerturbationCoefficients coefficients_from_json(const json& doc);
TargetSpectrum target_from_json(const json& doc);
PerturbedSpectrum spectrum_from_json(const json& doc);
cplx complex_from_json(const json& doc);

// Only the "a_head"/"a_tail" pair, for a fixed phi.
CoefficientSequence phi_from_json(const json& doc);

json read_file(const std::filesystem::path& path);
std::string dump(const json& doc);
// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const json& doc);

}  // namespace rank1::json_io
