#pragma once

#include <filesystem>
#include <string>

#include "odl1/bregman.hpp"
#include "odl1/frames.hpp"
#include "odl1/sensing.hpp"

namespace odl1 {

// Binary container: magic "ODL1", little-endian u32 JSON header length, the
// JSON header (shape, scalar kind, type-specific metadata), then the entries
// column-major as interleaved (re, im) doubles.

void save_frame(const Frame& frame, const std::filesystem::path& path);
Frame load_frame(const std::filesystem::path& path);

void save_sensing_model(const SensingModel& model,
                        const std::filesystem::path& path);
SensingModel load_sensing_model(const std::filesystem::path& path);

// RecoveryResult as a JSON document (histories as arrays).
std::string recovery_result_to_json(const RecoveryResult& result);

}  // namespace odl1
