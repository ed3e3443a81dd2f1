#include "gpcrec/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "gpcrec/errors.hpp"

namespace gpcrec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json to_json(const IndexSet& set) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        Json entry;
        Json pairs = Json::array();
        for (const auto& [dim, deg] : set.indices[i].entries())
            pairs.push_back(Json::array({dim, deg}));
        entry["s"] = std::move(pairs);
        entry["sigma"] = set.sigmas[i];
        arr.push_back(std::move(entry));
    }
    return arr;
}

IndexSet index_set_from_json(const Json& j) {
    IndexSet set;
    for (const auto& entry : j) {
        std::vector<MultiIndex::Entry> pairs;
        for (const auto& p : entry.at("s"))
            pairs.emplace_back(p.at(0).get<std::int32_t>(), p.at(1).get<std::int32_t>());
        set.indices.push_back(MultiIndex::from_pairs(std::move(pairs)));
        set.sigmas.push_back(entry.at("sigma").get<double>());
    }
    return set;
}

Json to_json(const SamplePlan& plan) {
    Json j;
    j["scheme"] = scheme_name(plan.scheme);
    j["seed"] = plan.seed;
    j["m"] = plan.m;
    j["J"] = plan.J;
    j["alpha"] = plan.alpha;
    Json points = Json::array();
    Json weights = Json::array();
    for (Eigen::Index i = 0; i < plan.points.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < plan.points.cols(); ++c) row.push_back(plan.points(i, c));
        points.push_back(std::move(row));
        weights.push_back(plan.weights(i));
    }
    j["points"] = std::move(points);
    j["weights"] = std::move(weights);
    return j;
}

Json to_json(const Approximant& approx) {
    Json j;
    j["basis"] = to_json(approx.basis);
    j["x_dim"] = approx.x_dim;
    Json coeffs = Json::array();
    for (Eigen::Index r = 0; r < approx.coefficients.rows(); ++r)
        for (Eigen::Index c = 0; c < approx.coefficients.cols(); ++c)
            coeffs.push_back(approx.coefficients(r, c));
    j["coefficients"] = std::move(coeffs);
    return j;
}

std::string plan_to_csv(const SamplePlan& plan) {
    std::string out;
    out += "# scheme,seed,m,J\n";
    out += "# ";
    out += scheme_name(plan.scheme);
    out += "," + std::to_string(plan.seed);
    out += "," + std::to_string(plan.m);
    out += "," + std::to_string(plan.J);
    out += "\n";
    for (int j = 1; j <= plan.J; ++j) out += "y_" + std::to_string(j) + ",";
    out += "omega\n";
    for (Eigen::Index i = 0; i < plan.points.rows(); ++i) {
        for (Eigen::Index c = 0; c < plan.points.cols(); ++c)
            out += format_double(plan.points(i, c)) + ",";
        out += format_double(plan.weights(i)) + "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

} // namespace gpcrec
