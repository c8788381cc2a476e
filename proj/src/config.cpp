#include "tumatch/config.hpp"

#include <json.hpp>

#include "tumatch/common.hpp"
#include "tumatch/io.hpp"

namespace tumatch {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ConfigError("config " + origin + ": " + what);
}

TypeSide parse_side(const json& j, const std::string& origin, const char* key) {
    if (!j.is_object()) fail(origin, std::string("types.") + key + " must be an object");
    if (j.contains("labels")) {
        std::vector<std::string> labels;
        for (const auto& l : j.at("labels")) labels.push_back(l.get<std::string>());
        return TypeSide::flat(std::move(labels));
    }
    if (j.contains("dims")) {
        std::vector<Dimension> dims;
        for (const auto& d : j.at("dims")) {
            Dimension dim;
            dim.name = d.at("name").get<std::string>();
            for (const auto& l : d.at("levels")) dim.levels.push_back(l.get<std::string>());
            dims.push_back(std::move(dim));
        }
        return TypeSide::product(std::move(dims));
    }
    fail(origin, std::string("types.") + key + " needs either 'labels' or 'dims'");
}

Table parse_table(const json& j, const std::string& origin) {
    if (!j.is_array() || j.empty()) fail(origin, "dense basis values must be a 2-d array");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) rows.push_back(r.get<std::vector<double>>());
    return Table::from_rows(rows);
}

void parse_basis(RunConfig& cfg, const json& j, const std::string& origin) {
    if (!j.is_array() || j.empty()) fail(origin, "'basis' must be a nonempty array");
    for (const auto& b : j) {
        const std::string name = b.value("name", std::string("phi") +
                                                     std::to_string(cfg.basis.size()));
        const std::string kind = b.at("kind").get<std::string>();
        try {
            if (kind == "dense") {
                cfg.basis.add(BasisSet::dense(name, parse_table(b.at("values"), origin)));
            } else if (kind == "indicator_interaction") {
                cfg.basis.add(BasisSet::indicator_interaction(
                    name, cfg.space.men.count(), cfg.space.women.count(),
                    b.at("i").get<std::size_t>(), b.at("j").get<std::size_t>()));
            } else if (kind == "diagonal_indicator") {
                std::optional<std::string> level;
                if (b.contains("level") && !b.at("level").is_null())
                    level = b.at("level").get<std::string>();
                cfg.basis.add(BasisSet::diagonal_indicator(
                    name, cfg.space, b.at("dim").get<std::string>(), level));
            } else if (kind == "coordinate_product") {
                cfg.basis.add(BasisSet::coordinate_product(
                    name, cfg.space, b.at("dim_x").get<std::string>(),
                    b.at("dim_y").get<std::string>()));
            } else {
                fail(origin, "unknown basis kind '" + kind + "'");
            }
        } catch (const InvalidArgument& e) {
            fail(origin, std::string("basis '") + name + "': " + e.what());
        }
    }
}

} // namespace

Margins RunConfig::require_margins() const {
    Margins m;
    if (margins) {
        m = *margins;
    } else {
        if (!margins_men_path || !margins_women_path)
            throw ConfigError(
                "margins are required: give 'margins' inline or margin files");
        m.p = read_margin_file(*margins_men_path, space.men.labels());
        m.q = read_margin_file(*margins_women_path, space.women.labels());
    }
    m.validate();
    return m;
}

RunConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path), "'" + path + "'");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config " + origin + ": " + e.what());
    }

    RunConfig cfg;
    try {
        if (!j.contains("types")) fail(origin, "missing 'types' section");
        cfg.space.men = parse_side(j.at("types").at("men"), origin, "men");
        cfg.space.women = parse_side(j.at("types").at("women"), origin, "women");

        if (j.contains("basis")) parse_basis(cfg, j.at("basis"), origin);

        if (j.contains("margins")) {
            Margins m;
            m.p = j.at("margins").at("men").get<std::vector<double>>();
            m.q = j.at("margins").at("women").get<std::vector<double>>();
            if (m.p.size() != cfg.space.men.count() ||
                m.q.size() != cfg.space.women.count())
                fail(origin, "margins length does not match the type space");
            cfg.margins = std::move(m);
        }

        if (j.contains("surplus") && j.at("surplus").contains("lambda"))
            cfg.lambda = j.at("surplus").at("lambda").get<std::vector<double>>();

        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            cfg.sigma = s.value("sigma", cfg.sigma);
            cfg.tol = s.value("tol", cfg.tol);
            cfg.max_iter = s.value("max_iter", cfg.max_iter);
        }
        if (j.contains("estimator")) {
            const auto& e = j.at("estimator");
            cfg.method = e.value("method", cfg.method);
            cfg.pseudo_count = e.value("pseudo_count", cfg.pseudo_count);
        }
        if (j.contains("geometry")) {
            const auto& g = j.at("geometry");
            if (g.contains("directions"))
                cfg.directions = g.at("directions").get<std::vector<std::vector<double>>>();
            cfg.n_directions = g.value("n_directions", cfg.n_directions);
            if (g.contains("sigma_grid"))
                cfg.sigma_grid = g.at("sigma_grid").get<std::vector<double>>();
        }
        if (j.contains("identify") && j.at("identify").contains("covariations"))
            cfg.covariations_in =
                j.at("identify").at("covariations").get<std::vector<double>>();

        if (j.contains("io")) {
            const auto& io = j.at("io");
            if (io.contains("couples")) cfg.couples_path = io.at("couples").get<std::string>();
            if (io.contains("margins_men"))
                cfg.margins_men_path = io.at("margins_men").get<std::string>();
            if (io.contains("margins_women"))
                cfg.margins_women_path = io.at("margins_women").get<std::string>();
            if (io.contains("output")) cfg.output_path = io.at("output").get<std::string>();
            cfg.format = io.value("format", cfg.format);
        }
    } catch (const json::exception& e) {
        fail(origin, e.what());
    }

    if (cfg.method != "np" && cfg.method != "sp" && cfg.method != "mm")
        fail(origin, "estimator.method must be np, sp or mm");
    if (cfg.format != "json" && cfg.format != "csv")
        fail(origin, "io.format must be json or csv");
    if (cfg.lambda && cfg.basis.size() > 0 && cfg.lambda->size() != cfg.basis.size())
        fail(origin, "surplus.lambda length does not match the basis");
    return cfg;
}

} // namespace tumatch
