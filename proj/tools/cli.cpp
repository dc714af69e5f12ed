#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "cuntz/error.hpp"
#include "cuntz/frames.hpp"
#include "cuntz/invariants.hpp"
#include "cuntz/io.hpp"
#include "cuntz/verify.hpp"
#include "cuntz/walkgraph.hpp"

#ifndef CUNTZ_DEFAULT_FIXTURE_DIR
#define CUNTZ_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace cuntz::cli {

using nlohmann::json;

namespace {

std::string num(double x, int precision = 12)
{
    std::ostringstream s;
    s << std::setprecision(precision) << x;
    return s.str();
}

std::string sci(double x)
{
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << x;
    return s.str();
}

std::string yes(bool b) { return b ? "true" : "false"; }

class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const
    {
        std::vector<std::size_t> width;
        for (const auto& row : rows_)
            for (std::size_t k = 0; k < row.size(); ++k) {
                width.resize(std::max(width.size(), row.size()));
                width[k] = std::max(width[k], row[k].size());
            }
        for (const auto& row : rows_) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                out << row[k];
                if (k + 1 < row.size())
                    out << std::string(width[k] - row[k].size() + 2, ' ');
            }
            out << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

class Csv {
public:
    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k)
                text_ << ',';
            const bool quote = cells[k].find_first_of(",\"") != std::string::npos;
            if (quote) {
                text_ << '"';
                for (char ch : cells[k])
                    text_ << (ch == '"' ? "\"\"" : std::string(1, ch));
                text_ << '"';
            } else {
                text_ << cells[k];
            }
        }
        text_ << '\n';
    }
    std::string str() const { return text_.str(); }

private:
    std::ostringstream text_;
};

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError(path.string() + ": cannot write file");
    out << text;
}

struct Context {
    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;
    json report = json::object();

    std::size_t lmax(std::size_t fallback) const { return cfg.lmax ? cfg.lmax : fallback; }
    std::size_t samples(std::size_t fallback) const { return cfg.samples ? cfg.samples : fallback; }

    void finish_outputs(const Csv* csv)
    {
        if (cfg.json)
            write_file(*cfg.json, report.dump(2) + "\n");
        if (csv && cfg.csv)
            write_file(*cfg.csv, csv->str());
    }
};

SystemConfig require_system(const Context& ctx)
{
    if (!ctx.cfg.system)
        throw InputError("this subcommand needs --config PATH");
    return load_system(*ctx.cfg.system);
}

const FilterSystem& require_filter(const SystemConfig& sys)
{
    if (!sys.filter)
        throw InputError("this subcommand needs a filter system file (got kind '" + to_string(sys.kind) + "')");
    return *sys.filter;
}

RationalPoint parse_point(const std::string& text, std::size_t dim)
{
    RationalPoint p = RationalPoint::parse(text);
    if (p.dim() != dim)
        throw InputError("point " + text + " has dimension " + std::to_string(p.dim()) + ", expected " +
                         std::to_string(dim));
    return p;
}

/// Minimal sets: exact search in dimension one, verified candidates otherwise.
std::vector<MinimalSet> minimal_sets(const SystemConfig& sys)
{
    const FilterSystem& fs = require_filter(sys);
    if (fs.dim() == 1 && fs.alpha())
        return find_minimal_sets_1d(fs);
    if (sys.candidate_sets.empty())
        throw InputError("no exact minimal-set search for this system; list candidate_sets in the config");
    std::vector<MinimalSet> out;
    for (const auto& s : sys.candidate_sets) {
        MinimalSet m{s};
        std::sort(m.points.begin(), m.points.end());
        out.push_back(std::move(m));
    }
    return out;
}

/// Point of smallest size in each minimal set.
std::vector<RationalPoint> default_basepoints(const SystemConfig& sys)
{
    std::vector<RationalPoint> out;
    for (const auto& set : minimal_sets(sys)) {
        const auto size = [](const RationalPoint& p) {
            Rational s = 0;
            for (const auto& c : p.coords())
                s += boost::multiprecision::abs(c);
            return s;
        };
        out.push_back(*std::min_element(set.points.begin(), set.points.end(),
                                        [&](const auto& a, const auto& b) { return size(a) < size(b); }));
    }
    return out;
}

std::vector<RationalPoint> basepoints(const Context& ctx, const SystemConfig& sys)
{
    if (ctx.cfg.points.empty())
        return default_basepoints(sys);
    std::vector<RationalPoint> out;
    for (const auto& p : ctx.cfg.points)
        out.push_back(parse_point(p, require_filter(sys).dim()));
    return out;
}

WalkGraph walk_through(const FilterSystem& fs, const RationalPoint& c)
{
    return walk_from_minimal_set(fs, MinimalSet{orbit_closure(fs, c)});
}

/// The walk and distinguished vertex selected by --config / --point / --vertex.
std::pair<WalkGraph, std::size_t> select_walk(const Context& ctx, const SystemConfig& sys)
{
    if (sys.walk) {
        std::size_t v = 0;
        if (!ctx.cfg.vertex.empty()) {
            auto found = sys.walk->find(ctx.cfg.vertex);
            if (!found)
                throw InputError("no vertex '" + ctx.cfg.vertex + "' in the walk");
            v = *found;
        }
        return {*sys.walk, v};
    }
    const FilterSystem& fs = require_filter(sys);
    const RationalPoint c = ctx.cfg.points.empty() ? default_basepoints(sys).at(0)
                                                   : parse_point(ctx.cfg.points.front(), fs.dim());
    WalkGraph g = walk_through(fs, c);
    return {std::move(g), *g.find(c)};
}

json report_json(const WalkReport& r)
{
    json j{{"normalized", r.normalized},     {"irreducible", r.irreducible},
           {"injective", r.injective},       {"separating", r.separating},
           {"sigma_fixed_dim", r.sigma_fixed_dim}, {"simple", r.simple},
           {"normalization_defect", r.normalization_defect}};
    j["reversing"] = r.reversing ? json(*r.reversing) : json(nullptr);
    return j;
}

void print_report(std::ostream& out, const WalkGraph& g, const WalkReport& r)
{
    Table t({"property", "value"});
    t.add({"vertices", std::to_string(g.vertex_count())});
    t.add({"letters", std::to_string(g.alphabet_size())});
    t.add({"normalized", yes(r.normalized)});
    t.add({"irreducible", yes(r.irreducible)});
    t.add({"injective", yes(r.injective)});
    t.add({"separating", yes(r.separating)});
    t.add({"reversing", r.reversing ? yes(*r.reversing) : "unknown"});
    t.add({"sigma_fixed_dim", std::to_string(r.sigma_fixed_dim)});
    t.add({"simple", yes(r.simple)});
    t.add({"normalization_defect", sci(r.normalization_defect)});
    t.print(out);
}

// --- subcommands ---------------------------------------------------------------

int cmd_inspect(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    ctx.report["system"] = sys.name;
    ctx.report["kind"] = to_string(sys.kind);
    if (sys.kind == ConfigKind::L2Q) {
        ctx.out << "system " << sys.name << ": l^2(Q) model, V_0^* e_r = lambda^0_r e_{r/2}, "
                << "V_1^* e_r = lambda^1_r e_{(r-1)/2}\n";
        ctx.finish_outputs(nullptr);
        return ok;
    }
    if (sys.walk) {
        Table t({"property", "value"});
        t.add({"system", sys.name});
        t.add({"kind", "walk"});
        t.add({"vertices", std::to_string(sys.walk->vertex_count())});
        t.add({"letters", std::to_string(sys.walk->alphabet_size())});
        t.add({"normalization_defect", sci(sys.walk->normalization_defect())});
        t.print(ctx.out);
        ctx.report["vertices"] = sys.walk->vertex_count();
        ctx.report["letters"] = sys.walk->alphabet_size();
        ctx.report["normalization_defect"] = sys.walk->normalization_defect();
        ctx.finish_outputs(nullptr);
        return ok;
    }
    const FilterSystem& fs = *sys.filter;
    const auto check = check_filter_matrix(fs);
    const bool overlap_free = check_no_overlap(fs);
    Table t({"property", "value"});
    t.add({"system", sys.name});
    t.add({"kind", to_string(sys.kind)});
    t.add({"dimension", std::to_string(fs.dim())});
    t.add({"digits (N)", std::to_string(fs.digit_count())});
    t.add({"filters (M)", std::to_string(fs.filter_count())});
    t.add({"expansive", yes(is_expansive(fs.ifs().scaling()))});
    t.add({"no-overlap", yes(overlap_free)});
    t.add({"alpha-form", yes(fs.alpha().has_value())});
    t.add({"filter matrix", to_string(check.kind)});
    t.add({"column defect", sci(check.max_column_defect)});
    t.add({"row defect", sci(check.max_row_defect)});
    t.print(ctx.out);
    ctx.report["dimension"] = fs.dim();
    ctx.report["digits"] = fs.digit_count();
    ctx.report["filters"] = fs.filter_count();
    ctx.report["expansive"] = is_expansive(fs.ifs().scaling());
    ctx.report["no_overlap"] = overlap_free;
    ctx.report["alpha_form"] = fs.alpha().has_value();
    ctx.report["filter_matrix"] = to_string(check.kind);
    ctx.report["max_column_defect"] = check.max_column_defect;
    ctx.report["max_row_defect"] = check.max_row_defect;
    ctx.finish_outputs(nullptr);
    return check.kind == FilterMatrixKind::Invalid ? verification_failure : ok;
}

int cmd_minimal_sets(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const FilterSystem& fs = require_filter(sys);
    const bool searched = fs.dim() == 1 && fs.alpha();
    const auto sets = minimal_sets(sys);
    ctx.out << (searched ? "exact search" : "verified candidates") << ": " << sets.size() << " set(s)\n";
    bool all_ok = true;
    json list = json::array();
    std::vector<WalkGraph> walks;
    for (const auto& set : sets) {
        const auto chk = verify_invariant(fs, set.points);
        ctx.out << to_string(set) << '\n';
        json entry{{"points", json::array()}, {"invariant", chk.invariant}, {"minimal", chk.minimal},
                   {"extreme", chk.extreme}};
        for (const auto& p : set.points)
            entry["points"].push_back(p.to_string());
        ctx.out << "  invariant " << yes(chk.invariant) << ", minimal " << yes(chk.minimal) << ", extreme "
                << yes(chk.extreme) << '\n';
        for (const auto& e : chk.escapes)
            ctx.out << "  escape: " << e.source.to_string() << " --" << e.letter << "--> " << e.target.to_string()
                    << " (|nu| = " << num(std::abs(e.weight), 6) << ")\n";
        if (!chk.invariant || !chk.minimal || !chk.extreme) {
            all_ok = false;
            list.push_back(std::move(entry));
            continue;
        }
        const WalkGraph g = walk_from_minimal_set(fs, set);
        const auto rep = analyze(g);
        ctx.out << "  walk: " << g.vertex_count() << " vertices, irreducible " << yes(rep.irreducible)
                << ", injective " << yes(rep.injective) << ", separating " << yes(rep.separating) << ", reversing "
                << (rep.reversing ? yes(*rep.reversing) : "unknown") << ", sigma_fixed_dim " << rep.sigma_fixed_dim
                << '\n';
        entry["walk"] = report_json(rep);
        list.push_back(std::move(entry));
        walks.push_back(g);
    }
    ctx.report["system"] = sys.name;
    ctx.report["sets"] = std::move(list);
    if (ctx.cfg.emit) {
        if (ctx.cfg.set_index >= walks.size())
            throw InputError("--set " + std::to_string(ctx.cfg.set_index) + " out of range");
        write_file(*ctx.cfg.emit, to_json_text(walks[ctx.cfg.set_index]) + "\n");
    }
    ctx.finish_outputs(nullptr);
    return all_ok ? ok : verification_failure;
}

int cmd_walk_analyze(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const auto [g, v] = select_walk(ctx, sys);
    (void)v;
    const auto rep = analyze(g);
    print_report(ctx.out, g, rep);
    ctx.report = report_json(rep);
    ctx.report["vertices"] = g.vertex_count();
    ctx.finish_outputs(nullptr);
    return ok;
}

int cmd_cycle_words(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const auto [g, v] = select_walk(ctx, sys);
    const std::size_t lmax = ctx.lmax(4);
    const auto words = enumerate_cycle_words(g, v, lmax);
    ctx.out << "cycle words at " << g.vertex(v).id << " up to length " << lmax << ": " << words.size() << '\n';
    Table t({"word", "weight_re", "weight_im", "|weight|^2"});
    Csv csv;
    csv.row({"word", "weight_re", "weight_im", "mass"});
    json list = json::array();
    for (const auto& cw : words) {
        const auto row = std::vector<std::string>{cw.word.to_string(), num(cw.weight.real()), num(cw.weight.imag()),
                                                  num(std::norm(cw.weight))};
        t.add(row);
        csv.row(row);
        list.push_back({{"word", cw.word.to_string()}, {"weight", {cw.weight.real(), cw.weight.imag()}}});
    }
    t.print(ctx.out);
    ctx.report["vertex"] = g.vertex(v).id;
    ctx.report["cycle_words"] = std::move(list);
    ctx.finish_outputs(&csv);
    return ok;
}

int cmd_frame_export(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const FilterSystem& fs = require_filter(sys);
    Csv csv;
    std::size_t count = 0;
    if (sys.kind == ConfigKind::Walsh) {
        const std::size_t lmax = ctx.lmax(3);
        const auto atoms = walsh_atoms(fs.coefficients(), lmax);
        std::vector<std::string> header{"word", "level"};
        std::size_t cells = 1;
        for (std::size_t k = 0; k < lmax; ++k)
            cells *= fs.digit_count();
        for (std::size_t j = 0; j < cells; ++j) {
            header.push_back("c" + std::to_string(j) + "_re");
            header.push_back("c" + std::to_string(j) + "_im");
        }
        csv.row(header);
        for (const auto& a : atoms) {
            std::vector<std::string> row{a.word.display(), std::to_string(a.function.level())};
            for (const auto& v : a.function.lifted(lmax).values()) {
                row.push_back(num(v.real(), 17));
                row.push_back(num(v.imag(), 17));
            }
            csv.row(row);
        }
        count = atoms.size();
    } else {
        const std::size_t lmax = ctx.lmax(4);
        csv.row({"word", "label", "weight_re", "weight_im", "basepoint"});
        for (const auto& c : basepoints(ctx, sys)) {
            const WalkGraph g = walk_through(fs, c);
            for (const auto& a : frame_atoms(fs, g, *g.find(c), lmax)) {
                csv.row({a.word.display(), a.label.to_string(), num(a.weight.real(), 17), num(a.weight.imag(), 17),
                         c.to_string()});
                ++count;
            }
        }
    }
    if (ctx.cfg.csv)
        ctx.out << "wrote " << count << " atoms to " << ctx.cfg.csv->string() << '\n';
    else
        ctx.out << csv.str();
    ctx.report["atoms"] = count;
    ctx.finish_outputs(&csv);
    return ok;
}

int cmd_gram(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const FilterSystem& fs = require_filter(sys);
    GramReport rep;
    bool expect_identity = true;
    if (sys.kind == ConfigKind::Walsh) {
        std::vector<StepFunction> fns;
        for (auto& a : walsh_atoms(fs.coefficients(), ctx.lmax(4)))
            fns.push_back(std::move(a.function));
        rep = gram(fns);
        expect_identity = fs.filter_count() == fs.digit_count();
    } else {
        std::vector<FourierAtom> atoms;
        for (const auto& c : basepoints(ctx, sys)) {
            const WalkGraph g = walk_through(fs, c);
            auto part = frame_atoms(fs, g, *g.find(c), ctx.lmax(3));
            atoms.insert(atoms.end(), part.begin(), part.end());
        }
        rep = gram(fs, atoms, ctx.cfg.depth);
    }
    Table t({"quantity", "value"});
    t.add({"atoms", std::to_string(rep.size)});
    t.add({"max |off-diagonal|", sci(rep.max_off_diagonal)});
    t.add({"max |diagonal - 1|", sci(rep.max_diagonal_defect)});
    t.add({"depth", rep.depth ? std::to_string(rep.depth) : std::string("exact")});
    t.add({"last-factor deviation", sci(rep.max_tail_deviation)});
    t.print(ctx.out);
    Csv csv;
    csv.row({"j", "k", "re", "im"});
    for (Eigen::Index j = 0; j < rep.matrix.rows(); ++j)
        for (Eigen::Index k = 0; k < rep.matrix.cols(); ++k)
            csv.row({std::to_string(j), std::to_string(k), num(rep.matrix(j, k).real(), 17),
                     num(rep.matrix(j, k).imag(), 17)});
    ctx.report = {{"size", rep.size},
                  {"max_off_diagonal", rep.max_off_diagonal},
                  {"max_diagonal_defect", rep.max_diagonal_defect},
                  {"depth", rep.depth},
                  {"max_tail_deviation", rep.max_tail_deviation}};
    ctx.finish_outputs(&csv);
    const bool pass = !expect_identity || rep.max_deviation() <= ctx.cfg.tolerance;
    if (!pass)
        ctx.err << "Gram matrix deviates from the identity by " << sci(rep.max_deviation()) << " > "
                << sci(ctx.cfg.tolerance) << '\n';
    return pass ? ok : verification_failure;
}

StepFunction random_step(std::mt19937_64& rng, std::size_t base, std::size_t level)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t cells = 1;
    for (std::size_t k = 0; k < level; ++k)
        cells *= base;
    std::vector<Complex> values(cells);
    for (auto& v : values)
        v = {u(rng), u(rng)};
    return StepFunction(base, level, std::move(values));
}

int cmd_parseval(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const FilterSystem& fs = require_filter(sys);
    std::mt19937_64 rng(ctx.cfg.seed);
    Csv csv;
    csv.row({"test", "n", "s_n"});
    json list = json::array();
    bool pass = true;

    const auto emit = [&](const std::string& label, const ParsevalProfile& p) {
        ctx.out << "test " << label << ": target " << num(p.target) << ", atoms " << p.atom_count << ", monotone "
                << yes(p.monotone) << ", bessel " << yes(p.bessel);
        if (p.depth)
            ctx.out << ", depth " << p.depth << ", last-factor deviation " << sci(p.max_tail_deviation);
        ctx.out << '\n';
        Table t({"n", "s_n", "target - s_n"});
        for (std::size_t n = 0; n < p.sums.size(); ++n) {
            t.add({std::to_string(n), num(p.sums[n], 15), sci(p.target - p.sums[n])});
            csv.row({label, std::to_string(n), num(p.sums[n], 17)});
        }
        t.print(ctx.out);
        list.push_back({{"test", label}, {"sums", p.sums}, {"target", p.target}, {"monotone", p.monotone},
                        {"bessel", p.bessel}, {"depth", p.depth}, {"max_tail_deviation", p.max_tail_deviation}});
        pass = pass && p.monotone && p.bessel;
    };

    if (sys.kind == ConfigKind::Walsh) {
        const std::size_t n = ctx.lmax(6);
        for (std::size_t k = 0; k < ctx.samples(1); ++k) {
            const auto f = random_step(rng, fs.digit_count(), n);
            const auto p = walsh_parseval_profile(fs.coefficients(), f, n);
            emit("f" + std::to_string(k), p);
            const double defect = std::abs(p.sums.back() - p.target);
            ctx.out << "exact defect at n = " << n << ": " << sci(defect) << '\n';
            pass = pass && defect < 1e-10;
        }
    } else {
        const RationalPoint c = basepoints(ctx, sys).at(0);
        const WalkGraph g = walk_through(fs, c);
        std::vector<RationalPoint> tests;
        for (const auto& t : ctx.cfg.tests)
            tests.push_back(parse_point(t, fs.dim()));
        if (tests.empty()) {
            std::uniform_int_distribution<std::int64_t> numer(-400, 400);
            std::uniform_int_distribution<std::int64_t> denom(1, 50);
            for (std::size_t k = 0; k < ctx.samples(1); ++k) {
                std::vector<Rational> coords;
                for (std::size_t d = 0; d < fs.dim(); ++d)
                    coords.emplace_back(numer(rng), denom(rng));
                tests.emplace_back(std::move(coords));
            }
        }
        ctx.out << "basepoint " << c.to_string() << '\n';
        for (const auto& t : tests)
            emit(t.to_string(), parseval_profile(fs, g, *g.find(c), t, ctx.lmax(8), ctx.cfg.depth));
    }
    ctx.report["profiles"] = std::move(list);
    ctx.finish_outputs(&csv);
    return pass ? ok : verification_failure;
}

int cmd_walsh_verify(Context& ctx)
{
    const SystemConfig sys = require_system(ctx);
    const FilterSystem& fs = require_filter(sys);
    const Eigen::MatrixXcd& a = fs.coefficients();
    validate_walsh_matrix(a);
    const std::size_t n = ctx.lmax(6);
    std::mt19937_64 rng(ctx.cfg.seed);
    double worst = 0.0;
    const std::size_t samples = ctx.samples(100);
    for (std::size_t k = 0; k < samples; ++k)
        worst = std::max(worst, walsh_parseval_exact(a, n, random_step(rng, fs.digit_count(), n)));
    const bool unitary = fs.filter_count() == fs.digit_count();
    Table t({"check", "value"});
    t.add({"matrix", unitary ? "unitary (M = N)" : "isometry (M > N)"});
    t.add({"level", std::to_string(n)});
    t.add({"random step functions", std::to_string(samples)});
    t.add({"max Parseval defect", sci(worst)});
    bool pass = worst < 1e-10;
    ctx.report = {{"level", n}, {"samples", samples}, {"max_defect", worst}, {"unitary", unitary}};
    if (unitary) {
        std::vector<StepFunction> fns;
        for (auto& atom : walsh_atoms(a, n))
            fns.push_back(std::move(atom.function));
        std::size_t cells = 1;
        for (std::size_t k = 0; k < n; ++k)
            cells *= fs.digit_count();
        const auto g = gram(fns);
        t.add({"atoms (expected N^n)", std::to_string(fns.size()) + " (" + std::to_string(cells) + ")"});
        t.add({"max |G - I|", sci(g.max_deviation())});
        pass = pass && fns.size() == cells && g.max_deviation() < 1e-12;
        ctx.report["atoms"] = fns.size();
        ctx.report["gram_max_deviation"] = g.max_deviation();
    }
    t.print(ctx.out);
    ctx.finish_outputs(nullptr);
    return pass ? ok : verification_failure;
}

int cmd_l2q(Context& ctx)
{
    const auto max_m = static_cast<unsigned>(ctx.lmax(10));
    const auto bounds = l2q_frame_bounds(max_m);
    Table t({"m", "word", "<e_{2^m}, V_w e_0>", "(1/sqrt2)^{m+1}", "frame sum", "(1/2)^{m+1}"});
    Csv csv;
    csv.row({"m", "pairing", "frame_sum"});
    bool pass = true;
    json rows = json::array();
    for (unsigned m = 1; m <= max_m; ++m) {
        std::vector<Letter> letters(m, 0);
        letters.push_back(1);
        const Word w(letters);
        const double pairing = l2q_pairing(m, w).real();
        const double expected = std::pow(std::sqrt(0.5), m + 1);
        const double sum = bounds.ratios[m - 1];
        pass = pass && std::abs(pairing - expected) < 1e-12 && std::abs(sum - expected * expected) < 1e-12;
        t.add({std::to_string(m), w.to_string(), num(pairing), num(expected), num(sum), num(expected * expected)});
        csv.row({std::to_string(m), num(pairing, 17), num(sum, 17)});
        rows.push_back({{"m", m}, {"pairing", pairing}, {"frame_sum", sum}});
    }
    t.print(ctx.out);
    ctx.out << "lower frame bound estimate A_est = " << sci(bounds.lower) << " (tends to 0 with m)\n";
    ctx.report = {{"rows", rows}, {"lower", bounds.lower}, {"upper", bounds.upper}};
    ctx.finish_outputs(&csv);
    return pass ? ok : verification_failure;
}

int cmd_selftest(Context& ctx)
{
    acceptance::Options opt;
    opt.fixtures = ctx.cfg.fixtures;
    opt.seed = ctx.cfg.seed == 1 ? opt.seed : ctx.cfg.seed;
    const auto results = acceptance::run_all(opt);
    acceptance::print(ctx.out, results);
    json list = json::array();
    for (const auto& r : results)
        list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    ctx.report["criteria"] = std::move(list);
    ctx.finish_outputs(nullptr);
    return acceptance::all_passed(results) ? ok : verification_failure;
}

} // namespace

Parsed parse_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    cfg.fixtures = CUNTZ_DEFAULT_FIXTURE_DIR;
    CLI::App app{"Parseval frames and bases from Cuntz-algebra filter systems", "cuntzctl"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--config", cfg.system, "system file (JSON)");
    app.add_option("--lmax", cfg.lmax, "maximal word length (at most 16)");
    app.add_option("--depth", cfg.depth, "mu_hat truncation depth")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for randomized tests");
    app.add_option("--csv", cfg.csv, "write CSV output to this path");
    app.add_option("--json", cfg.json, "write a JSON report to this path");
    app.add_option("--point", cfg.points, "basepoint such as -1 or \"(0, -2/3)\" (repeatable)");
    app.add_option("--test", cfg.tests, "test frequency for parseval (repeatable)");
    app.add_option("--vertex", cfg.vertex, "vertex id for walk files");
    app.add_option("--samples", cfg.samples, "number of random tests");
    app.add_option("--tol", cfg.tolerance, "tolerance for gram")->check(CLI::PositiveNumber);
    app.add_option("--fixtures", cfg.fixtures, "fixture directory for selftest");

    app.add_subcommand("inspect", "filter-matrix class, no-overlap, expansiveness");
    auto* ms = app.add_subcommand("minimal-sets", "minimal invariant sets and their walks");
    ms->add_option("--emit", cfg.emit, "write the walk of one set as JSON");
    ms->add_option("--set", cfg.set_index, "index of the set for --emit");
    auto* walk = app.add_subcommand("walk", "random walk tools");
    walk->require_subcommand(1);
    walk->add_subcommand("analyze", "structural properties of the walk");
    app.add_subcommand("cycle-words", "cycle words at a vertex");
    auto* frame = app.add_subcommand("frame", "frame atoms");
    frame->require_subcommand(1);
    frame->add_subcommand("export", "write atoms as CSV");
    app.add_subcommand("gram", "Gram matrix of the atoms");
    app.add_subcommand("parseval", "Parseval partial-sum profiles");
    auto* walsh = app.add_subcommand("walsh", "Walsh systems");
    walsh->require_subcommand(1);
    walsh->add_subcommand("verify", "exact Parseval identity and orthogonality");
    auto* counter = app.add_subcommand("counterexample", "counterexamples");
    counter->require_subcommand(1);
    counter->add_subcommand("l2q", "the l^2(Q) family that is not a frame");
    app.add_subcommand("selftest", "run the acceptance suite");

    Parsed parsed;
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        parsed.exit_code = app.exit(e, out, err) == 0 ? ok : input_error;
        return parsed;
    }
    for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
        sub = sub->get_subcommands().front();
        cfg.command.push_back(sub->get_name());
    }
    parsed.config = std::move(cfg);
    return parsed;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Context ctx{config, out, err};
    try {
        if (config.lmax > max_word_length)
            throw InputError("--lmax " + std::to_string(config.lmax) + " exceeds the cap of " +
                             std::to_string(max_word_length));
        std::string name;
        for (const auto& part : config.command)
            name += (name.empty() ? "" : " ") + part;
        static const std::map<std::string, int (*)(Context&)> commands{
            {"inspect", cmd_inspect},           {"minimal-sets", cmd_minimal_sets}, {"walk analyze", cmd_walk_analyze},
            {"cycle-words", cmd_cycle_words},   {"frame export", cmd_frame_export}, {"gram", cmd_gram},
            {"parseval", cmd_parseval},         {"walsh verify", cmd_walsh_verify}, {"counterexample l2q", cmd_l2q},
            {"selftest", cmd_selftest},
        };
        const auto it = commands.find(name);
        if (it == commands.end())
            throw InputError("unknown subcommand '" + name + "'");
        return it->second(ctx);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    const Parsed parsed = parse_command_line(argc, argv, out, err);
    if (!parsed.config)
        return parsed.exit_code;
    return run(*parsed.config, out, err);
}

} // namespace cuntz::cli
