#include "cuntz/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cuntz/error.hpp"

namespace cuntz {

using nlohmann::json;

namespace {

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const
    {
        throw InputError(source_ + ": field '" + path + "': " + what);
    }

    const json& field(const json& obj, const std::string& key, const std::string& path) const
    {
        if (!obj.contains(key))
            fail(path.empty() ? key : path + "." + key, "missing");
        return obj.at(key);
    }

    std::int64_t integer(const json& v, const std::string& path) const
    {
        if (!v.is_number_integer())
            fail(path, "expected an integer, got " + std::string(v.type_name()));
        return v.get<std::int64_t>();
    }

    double real(const json& v, const std::string& path) const
    {
        if (v.is_number())
            return v.get<double>();
        if (v.is_string()) {
            try {
                return parse_rational(v.get<std::string>()).convert_to<double>();
            } catch (const Error&) {
            }
        }
        fail(path, "expected a number");
    }

    Complex complex(const json& v, const std::string& path) const
    {
        if (v.is_array()) {
            if (v.size() != 2)
                fail(path, "expected [re, im]");
            return {real(v[0], path + "[0]"), real(v[1], path + "[1]")};
        }
        if (v.is_number() || v.is_string())
            return {real(v, path), 0.0};
        fail(path, "expected a number or an [re, im] pair");
    }

    /// An integer vector; a bare integer is read as a vector of length one.
    IntVector int_vector(const json& v, const std::string& path) const
    {
        if (v.is_number_integer())
            return {v.get<std::int64_t>()};
        if (!v.is_array())
            fail(path, "expected an integer vector");
        IntVector out;
        for (std::size_t k = 0; k < v.size(); ++k)
            out.push_back(integer(v[k], path + "[" + std::to_string(k) + "]"));
        return out;
    }

    std::vector<IntVector> int_rows(const json& v, const std::string& path) const
    {
        if (!v.is_array() || v.empty())
            fail(path, "expected a nonempty list");
        std::vector<IntVector> out;
        for (std::size_t k = 0; k < v.size(); ++k)
            out.push_back(int_vector(v[k], path + "[" + std::to_string(k) + "]"));
        return out;
    }

    IntMatrix matrix(const json& v, const std::string& path) const
    {
        if (v.is_number_integer())
            return IntMatrix::from_rows({{v.get<std::int64_t>()}});
        auto rows = int_rows(v, path);
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (rows[k].size() != rows.size())
                fail(path + "[" + std::to_string(k) + "]", "R must be square");
        return IntMatrix::from_rows(rows);
    }

    RationalPoint point(const json& v, const std::string& path) const
    {
        try {
            if (v.is_string())
                return RationalPoint::parse(v.get<std::string>());
            if (v.is_number_integer())
                return RationalPoint::from_integers(IntVector{v.get<std::int64_t>()});
            if (v.is_array()) {
                std::vector<Rational> coords;
                for (const auto& c : v)
                    coords.push_back(c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<std::int64_t>()));
                return RationalPoint(std::move(coords));
            }
        } catch (const Error& e) {
            fail(path, e.what());
        } catch (const json::exception&) {
        }
        fail(path, "expected a rational point such as \"(-1/2, 3)\"");
    }

    Rational rational(const json& v, const std::string& path) const
    {
        try {
            if (v.is_string())
                return parse_rational(v.get<std::string>());
            if (v.is_number_integer())
                return Rational(v.get<std::int64_t>());
        } catch (const Error& e) {
            fail(path, e.what());
        }
        fail(path, "expected a rational number");
    }

private:
    std::string source_;
};

FilterSystem read_filter(const Reader& rd, const json& doc, const std::string& name)
{
    const IntMatrix r = rd.matrix(rd.field(doc, "R", ""), "R");
    const auto digits = rd.int_rows(rd.field(doc, "B", ""), "B");
    const auto freqs = rd.int_rows(rd.field(doc, "l", ""), "l");
    for (std::size_t k = 0; k < digits.size(); ++k)
        if (digits[k].size() != r.rows())
            rd.fail("B[" + std::to_string(k) + "]", "dimension " + std::to_string(digits[k].size()) +
                                                      " does not match R (" + std::to_string(r.rows()) + ")");
    for (std::size_t k = 0; k < freqs.size(); ++k)
        if (freqs[k].size() != r.rows())
            rd.fail("l[" + std::to_string(k) + "]", "dimension " + std::to_string(freqs[k].size()) +
                                                      " does not match R (" + std::to_string(r.rows()) + ")");

    std::optional<IFSSpec> ifs;
    try {
        ifs.emplace(r, digits);
    } catch (const InputError& e) {
        rd.fail("R", e.what());
    }

    const bool has_a = doc.contains("a");
    if (has_a == doc.contains("alpha"))
        rd.fail("a", "exactly one of 'a' and 'alpha' is required");
    try {
        if (!has_a) {
            const json& av = doc.at("alpha");
            if (!av.is_array() || av.size() != freqs.size())
                rd.fail("alpha", "expected " + std::to_string(freqs.size()) + " entries, one per frequency");
            std::vector<Complex> alpha;
            for (std::size_t i = 0; i < av.size(); ++i)
                alpha.push_back(rd.complex(av[i], "alpha[" + std::to_string(i) + "]"));
            return FilterSystem::from_alpha(std::move(*ifs), freqs, alpha, name);
        }
        const json& av = doc.at("a");
        if (!av.is_array() || av.size() != freqs.size())
            rd.fail("a", "expected " + std::to_string(freqs.size()) + " rows (one per frequency), got " +
                             (av.is_array() ? std::to_string(av.size()) : std::string(av.type_name())));
        Eigen::MatrixXcd a(static_cast<Eigen::Index>(freqs.size()), static_cast<Eigen::Index>(digits.size()));
        for (std::size_t i = 0; i < av.size(); ++i) {
            const std::string row = "a[" + std::to_string(i) + "]";
            if (!av[i].is_array() || av[i].size() != digits.size())
                rd.fail(row, "expected " + std::to_string(digits.size()) + " entries (one per digit)");
            for (std::size_t b = 0; b < digits.size(); ++b)
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) =
                    rd.complex(av[i][b], row + "[" + std::to_string(b) + "]");
        }
        return FilterSystem(std::move(*ifs), freqs, std::move(a), name);
    } catch (const InputError& e) {
        if (std::string(e.what()).find("field '") != std::string::npos)
            throw;
        rd.fail(has_a ? "a" : "alpha", e.what());
    }
}

WalkGraph read_walk(const Reader& rd, const json& doc)
{
    const json& vs = rd.field(doc, "vertices", "");
    if (!vs.is_array() || vs.empty())
        rd.fail("vertices", "expected a nonempty list of vertex ids");
    std::vector<WalkVertex> vertices;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const std::string path = "vertices[" + std::to_string(k) + "]";
        if (vs[k].is_string())
            vertices.push_back({vs[k].get<std::string>(), std::nullopt});
        else if (vs[k].is_number_integer())
            vertices.push_back({std::to_string(vs[k].get<std::int64_t>()), std::nullopt});
        else
            rd.fail(path, "expected a string or integer id");
    }
    if (doc.contains("points")) {
        const json& ps = doc.at("points");
        if (!ps.is_array() || ps.size() != vertices.size())
            rd.fail("points", "expected one point per vertex");
        for (std::size_t k = 0; k < ps.size(); ++k)
            vertices[k].point = rd.point(ps[k], "points[" + std::to_string(k) + "]");
    }
    const auto index_of = [&](const json& v, const std::string& path) -> std::size_t {
        if (v.is_number_integer()) {
            const auto i = v.get<std::int64_t>();
            if (i < 0 || static_cast<std::size_t>(i) >= vertices.size())
                rd.fail(path, "vertex index " + std::to_string(i) + " out of range");
            return static_cast<std::size_t>(i);
        }
        if (v.is_string())
            for (std::size_t k = 0; k < vertices.size(); ++k)
                if (vertices[k].id == v.get<std::string>())
                    return k;
        rd.fail(path, "unknown vertex");
    };

    const json& es = rd.field(doc, "edges", "");
    const json& ws = rd.field(doc, "weights", "");
    if (!es.is_array() || es.empty())
        rd.fail("edges", "expected one list of targets per letter");
    if (!ws.is_array() || ws.size() != es.size())
        rd.fail("weights", "expected one list of weights per letter (" + std::to_string(es.size()) + ")");
    std::vector<std::vector<std::size_t>> targets(es.size());
    std::vector<std::vector<Complex>> weights(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string ep = "edges[" + std::to_string(i) + "]";
        const std::string wp = "weights[" + std::to_string(i) + "]";
        if (!es[i].is_array() || es[i].size() != vertices.size())
            rd.fail(ep, "expected one target per vertex");
        if (!ws[i].is_array() || ws[i].size() != vertices.size())
            rd.fail(wp, "expected one weight per vertex");
        for (std::size_t c = 0; c < vertices.size(); ++c) {
            targets[i].push_back(index_of(es[i][c], ep + "[" + std::to_string(c) + "]"));
            weights[i].push_back(rd.complex(ws[i][c], wp + "[" + std::to_string(c) + "]"));
        }
    }
    try {
        return WalkGraph(std::move(vertices), std::move(targets), std::move(weights));
    } catch (const InputError& e) {
        rd.fail("edges", e.what());
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json int_rows_json(const std::vector<IntVector>& rows)
{
    json out = json::array();
    for (const auto& r : rows)
        out.push_back(r);
    return out;
}

json filter_json(const FilterSystem& fs)
{
    json doc;
    if (!fs.name().empty())
        doc["name"] = fs.name();
    const IntMatrix& r = fs.ifs().scaling();
    std::vector<IntVector> rows;
    for (std::size_t k = 0; k < r.rows(); ++k)
        rows.push_back(r.row(k));
    doc["R"] = int_rows_json(rows);
    doc["B"] = int_rows_json(fs.ifs().digits());
    doc["l"] = int_rows_json(fs.frequencies());
    json a = json::array();
    for (Eigen::Index i = 0; i < fs.coefficients().rows(); ++i) {
        json row = json::array();
        for (Eigen::Index b = 0; b < fs.coefficients().cols(); ++b)
            row.push_back(complex_json(fs.coefficients()(i, b)));
        a.push_back(std::move(row));
    }
    doc["a"] = std::move(a);
    return doc;
}

json walk_json(const WalkGraph& g)
{
    json doc;
    json ids = json::array();
    json points = json::array();
    bool all_points = true;
    for (const auto& v : g.vertices()) {
        ids.push_back(v.id);
        if (v.point)
            points.push_back(v.point->to_string());
        else
            all_points = false;
    }
    doc["vertices"] = std::move(ids);
    if (all_points)
        doc["points"] = std::move(points);
    json edges = json::array();
    json weights = json::array();
    for (std::size_t i = 0; i < g.alphabet_size(); ++i) {
        edges.push_back(g.targets()[i]);
        json row = json::array();
        for (const auto& w : g.weights()[i])
            row.push_back(complex_json(w));
        weights.push_back(std::move(row));
    }
    doc["edges"] = std::move(edges);
    doc["weights"] = std::move(weights);
    return doc;
}

} // namespace

std::string to_string(ConfigKind kind)
{
    switch (kind) {
    case ConfigKind::Filter: return "filter";
    case ConfigKind::Walsh: return "walsh";
    case ConfigKind::Walk: return "walk";
    case ConfigKind::L2Q: return "l2q";
    }
    return "filter";
}

SystemConfig parse_system(std::string_view text, std::string_view source)
{
    const Reader rd(source);
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string(source) + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object())
        throw InputError(std::string(source) + ": expected a JSON object at the top level");

    SystemConfig cfg;
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            rd.fail("name", "expected a string");
        cfg.name = doc["name"].get<std::string>();
    }
    std::string kind = "filter";
    if (doc.contains("model"))
        kind = doc["model"].is_string() ? doc["model"].get<std::string>() : "";
    if (doc.contains("kind"))
        kind = doc["kind"].is_string() ? doc["kind"].get<std::string>() : "";

    if (kind == "l2q") {
        cfg.kind = ConfigKind::L2Q;
        return cfg;
    }
    if (kind == "walk") {
        cfg.kind = ConfigKind::Walk;
        cfg.walk.emplace(read_walk(rd, doc));
        return cfg;
    }
    if (kind == "walsh") {
        cfg.kind = ConfigKind::Walsh;
    } else if (kind != "filter") {
        rd.fail("kind", "expected one of filter, walsh, walk, l2q");
    }
    cfg.filter.emplace(read_filter(rd, doc, cfg.name));

    if (doc.contains("candidate_sets")) {
        const json& sets = doc["candidate_sets"];
        if (!sets.is_array())
            rd.fail("candidate_sets", "expected a list of point lists");
        for (std::size_t k = 0; k < sets.size(); ++k) {
            const std::string path = "candidate_sets[" + std::to_string(k) + "]";
            if (!sets[k].is_array() || sets[k].empty())
                rd.fail(path, "expected a nonempty list of points");
            std::vector<RationalPoint> pts;
            for (std::size_t j = 0; j < sets[k].size(); ++j) {
                pts.push_back(rd.point(sets[k][j], path + "[" + std::to_string(j) + "]"));
                if (pts.back().dim() != cfg.filter->dim())
                    rd.fail(path + "[" + std::to_string(j) + "]", "wrong dimension");
            }
            cfg.candidate_sets.push_back(std::move(pts));
        }
    }
    if (doc.contains("lines")) {
        const json& lines = doc["lines"];
        if (!lines.is_array())
            rd.fail("lines", "expected a list of line specifications");
        for (std::size_t k = 0; k < lines.size(); ++k) {
            const std::string path = "lines[" + std::to_string(k) + "]";
            LineSpec spec;
            spec.line.base = rd.point(rd.field(lines[k], "base", path), path + ".base");
            spec.line.direction = rd.point(rd.field(lines[k], "direction", path), path + ".direction");
            spec.s_min = rd.rational(rd.field(lines[k], "s_min", path), path + ".s_min");
            spec.s_max = rd.rational(rd.field(lines[k], "s_max", path), path + ".s_max");
            if (lines[k].contains("samples"))
                spec.samples = static_cast<std::size_t>(rd.integer(lines[k]["samples"], path + ".samples"));
            if (spec.line.base.dim() != cfg.filter->dim() || spec.line.direction.dim() != cfg.filter->dim())
                rd.fail(path, "wrong dimension");
            cfg.lines.push_back(std::move(spec));
        }
    }
    return cfg;
}

SystemConfig load_system(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError(path.string() + ": cannot open file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_system(text.str(), path.string());
}

std::string to_json_text(const FilterSystem& fs) { return filter_json(fs).dump(2); }

std::string to_json_text(const WalkGraph& g)
{
    json doc = walk_json(g);
    doc["kind"] = "walk";
    return doc.dump(2);
}

std::string to_json_text(const SystemConfig& cfg)
{
    json doc;
    if (cfg.kind == ConfigKind::Walk && cfg.walk)
        doc = walk_json(*cfg.walk);
    else if (cfg.filter)
        doc = filter_json(*cfg.filter);
    doc["kind"] = to_string(cfg.kind);
    if (!cfg.name.empty())
        doc["name"] = cfg.name;
    if (!cfg.candidate_sets.empty()) {
        json sets = json::array();
        for (const auto& s : cfg.candidate_sets) {
            json pts = json::array();
            for (const auto& p : s)
                pts.push_back(p.to_string());
            sets.push_back(std::move(pts));
        }
        doc["candidate_sets"] = std::move(sets);
    }
    if (!cfg.lines.empty()) {
        json lines = json::array();
        for (const auto& l : cfg.lines)
            lines.push_back({{"base", l.line.base.to_string()},
                             {"direction", l.line.direction.to_string()},
                             {"s_min", to_string(l.s_min)},
                             {"s_max", to_string(l.s_max)},
                             {"samples", l.samples}});
        doc["lines"] = std::move(lines);
    }
    return doc.dump(2);
}

bool same_system(const FilterSystem& a, const FilterSystem& b)
{
    return a.name() == b.name() && a.ifs().scaling() == b.ifs().scaling() && a.ifs().digits() == b.ifs().digits() &&
           a.frequencies() == b.frequencies() && a.coefficients() == b.coefficients();
}

bool same_config(const SystemConfig& a, const SystemConfig& b)
{
    if (a.kind != b.kind || a.name != b.name || a.candidate_sets != b.candidate_sets ||
        a.filter.has_value() != b.filter.has_value() || a.walk.has_value() != b.walk.has_value() ||
        a.lines.size() != b.lines.size())
        return false;
    for (std::size_t k = 0; k < a.lines.size(); ++k) {
        const auto& x = a.lines[k];
        const auto& y = b.lines[k];
        if (x.line.base != y.line.base || x.line.direction != y.line.direction || x.s_min != y.s_min ||
            x.s_max != y.s_max || x.samples != y.samples)
            return false;
    }
    if (a.filter && !same_system(*a.filter, *b.filter))
        return false;
    return !a.walk || *a.walk == *b.walk;
}

} // namespace cuntz
