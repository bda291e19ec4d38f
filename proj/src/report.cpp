#include "pdcp/report.hpp"

namespace pdcp {

nlohmann::json single_report(const DistanceSpec& spec, std::size_t n, std::size_t d, double delta,
                             const ScanResult& scan_result, const TestOutcome& test,
                             std::uint64_t seed, std::size_t replicates,
                             std::optional<double> elapsed_ms) {
    nlohmann::json j;
    j["method"] = "single";
    j["distance"] = spec.to_json();
    j["n"] = n;
    j["d"] = d;
    j["delta"] = delta;
    j["t_hat"] = scan_result.t_hat;
    j["s_hat"] = scan_result.s_hat;
    j["p_value"] = test.p_value;
    j["reject"] = test.reject;
    nlohmann::json points = nlohmann::json::array();
    if (test.reject)
        points.push_back({{"location", scan_result.t_hat}, {"p_value", test.p_value}, {"depth", 0}});
    j["change_points"] = std::move(points);
    j["seed"] = seed;
    j["B"] = replicates;
    if (elapsed_ms) j["elapsed_ms"] = *elapsed_ms;
    return j;
}

nlohmann::json multi_report(const DistanceSpec& spec, std::size_t n, std::size_t d,
                            const DetectionReport& report, std::uint64_t seed,
                            std::optional<double> elapsed_ms) {
    nlohmann::json j;
    j["method"] = "multi";
    j["distance"] = spec.to_json();
    j["n"] = n;
    j["d"] = d;
    j["delta"] = nullptr;
    j["t_hat"] = nullptr;
    j["s_hat"] = nullptr;
    j["p_value"] = nullptr;
    j["reject"] = !report.change_points.empty();
    nlohmann::json points = nlohmann::json::array();
    for (const ChangePoint& cp : report.change_points)
        points.push_back({{"location", cp.location}, {"p_value", cp.p_value}, {"depth", cp.depth}});
    j["change_points"] = std::move(points);
    j["seed"] = seed;
    j["B"] = report.config.replicates;
    j["alpha"] = report.config.alpha;
    j["min_seg"] = report.config.min_seg;
    nlohmann::json segments = nlohmann::json::array();
    for (const Segment& seg : report.segments) segments.push_back({{"lo", seg.lo}, {"hi", seg.hi}});
    j["segments"] = std::move(segments);
    nlohmann::json splits = nlohmann::json::array();
    for (const SplitRecord& sr : report.splits) {
        splits.push_back({{"lo", sr.segment.lo},
                          {"hi", sr.segment.hi},
                          {"t", sr.t},
                          {"s", sr.s},
                          {"score", sr.score},
                          {"p_value", sr.p_value},
                          {"reject", sr.reject},
                          {"depth", sr.depth}});
    }
    j["splits"] = std::move(splits);
    if (elapsed_ms) j["elapsed_ms"] = *elapsed_ms;
    return j;
}

}  // namespace pdcp
