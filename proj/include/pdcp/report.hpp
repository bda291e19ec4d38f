#pragma once

#include <cstdint>
#include <optional>

#include "json.hpp"
#include "pdcp/distance.hpp"
#include "pdcp/multi.hpp"
#include "pdcp/permutation.hpp"
#include "pdcp/scan.hpp"

namespace pdcp {

// Detection report emitted by the CLI; the schema is published in
// docs/report.schema.json. Timing is optional so reports stay byte-identical
// for a given seed regardless of thread count.
nlohmann::json single_report(const DistanceSpec& spec, std::size_t n, std::size_t d, double delta,
                             const ScanResult& scan_result, const TestOutcome& test,
                             std::uint64_t seed, std::size_t replicates,
                             std::optional<double> elapsed_ms = std::nullopt);

nlohmann::json multi_report(const DistanceSpec& spec, std::size_t n, std::size_t d,
                            const DetectionReport& report, std::uint64_t seed,
                            std::optional<double> elapsed_ms = std::nullopt);

}  // namespace pdcp
