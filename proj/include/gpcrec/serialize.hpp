#ifndef GPCREC_SERIALIZE_HPP
#define GPCREC_SERIALIZE_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gpcrec/index_set.hpp"
#include "gpcrec/sampling.hpp"

namespace gpcrec {

using Json = nlohmann::ordered_json;

/// IndexSet as a JSON array of {"s": [[j, s_j], ...], "sigma": number},
/// in set order.
Json to_json(const IndexSet& set);
IndexSet index_set_from_json(const Json& j);

Json to_json(const SamplePlan& plan);
Json to_json(const Approximant& approx);

/// CSV with a metadata comment header and one row y_1,...,y_J,omega per point.
std::string plan_to_csv(const SamplePlan& plan);

/// Deterministic shortest-round-trip-free formatting: fixed %.17g everywhere.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace gpcrec

#endif
