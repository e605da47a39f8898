#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cogrates/discrete_icdms.hpp"
#include "cogrates/errors.hpp"
#include "cogrates/frontier_search.hpp"
#include "cogrates/gaussian_zic.hpp"
#include "cogrates/joint_pmf.hpp"
#include "cogrates/polytope_fm.hpp"
#include "cogrates/region_spec.hpp"

namespace cogrates::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create directory " + dir);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "not a number: " + s);
  }
}

// "1,0;1,1;0,1"
std::vector<std::array<double, 2>> parse_weights(const std::string& s) {
  std::vector<std::array<double, 2>> w;
  for (const auto& pair : split_list(s, ';')) {
    auto xy = split_list(pair, ',');
    if (xy.size() != 2) throw Error(ErrorCode::ParseError, "weights are pairs w1,w2 separated by ';'");
    w.push_back({parse_real(xy[0]), parse_real(xy[1])});
  }
  return w;
}

json envelope_json(const Envelope& e) {
  json j;
  j["r1"] = std::vector<double>(e.r1_grid().begin(), e.r1_grid().end());
  j["r2"] = std::vector<double>(e.r2_max().begin(), e.r2_max().end());
  return j;
}

// ------------------------------------------------------------------ SVG

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double nice_step(double range) {
  double raw = range / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string escape_xml(const std::string& s) {
  std::string o;
  for (char ch : s) {
    switch (ch) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += ch;
    }
  }
  return o;
}

// ------------------------------------------------------------ Gaussian

struct GaussianOptions {
  double p1 = 6.0, p2 = 6.0, k = 1.0, b = 1.0;
  std::size_t samples = kDefaultEnvelopeSamples;
  std::size_t alpha_steps = 101, beta_steps = 101, mu_steps = 201;
  bool coarse = false;
  std::string config;
};

void apply_gaussian_config(GaussianOptions& o, const json& j) {
  static const std::map<std::string, std::function<void(GaussianOptions&, const json&)>> setters{
      {"P1", [](GaussianOptions& g, const json& v) { g.p1 = v.get<double>(); }},
      {"P2", [](GaussianOptions& g, const json& v) { g.p2 = v.get<double>(); }},
      {"K", [](GaussianOptions& g, const json& v) { g.k = v.get<double>(); }},
      {"b", [](GaussianOptions& g, const json& v) { g.b = v.get<double>(); }},
      {"samples", [](GaussianOptions& g, const json& v) { g.samples = v.get<std::size_t>(); }},
      {"alpha_steps", [](GaussianOptions& g, const json& v) { g.alpha_steps = v.get<std::size_t>(); }},
      {"beta_steps", [](GaussianOptions& g, const json& v) { g.beta_steps = v.get<std::size_t>(); }},
      {"mu_steps", [](GaussianOptions& g, const json& v) { g.mu_steps = v.get<std::size_t>(); }},
      {"coarse", [](GaussianOptions& g, const json& v) { g.coarse = v.get<bool>(); }},
  };
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::ParseError, "unknown config key " + key);
    try {
      it->second(o, value);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "config key " + key + ": " + e.what());
    }
  }
}

SweepGrid make_grid(const GaussianOptions& o) {
  SweepGrid g;
  g.alpha_steps = o.alpha_steps;
  g.beta_steps = o.beta_steps;
  g.mu_steps = o.mu_steps;
  g.r1_samples = o.samples;
  g.refine = !o.coarse;
  if (g.alpha_steps < 2 || g.beta_steps < 2 || g.mu_steps < 2 || g.r1_samples < 2)
    throw Error(ErrorCode::InvalidParameter, "grid sizes must be at least 2");
  return g;
}

Envelope gaussian_region(const std::string& name, const StandardZic& c, SweepGrid g,
                         const std::vector<double>& extra = {}) {
  g.extra_r1 = extra;
  if (name == "r1") return region_r1(c, g.r1_samples, extra);
  if (name == "r2") return region_r2(c);
  if (name == "r3") return region_r3(c, g);
  if (name == "r4") return region_r4(c, g);
  if (name == "r5") return region_r5(c, g);
  if (name == "outer") return outer_bound_gaussian(c, g);
  throw Error(ErrorCode::InvalidParameter, "unknown region " + name);
}

std::string display_name(const std::string& region) {
  if (region == "outer") return "Ro";
  std::string s = region;
  s[0] = 'R';
  return s;
}

std::string output_for(const std::string& format, const std::string& title, const std::string& label,
                       const Envelope& e, const json& meta) {
  if (format == "json") {
    json j = meta;
    j["envelope"] = envelope_json(e);
    return j.dump(2) + "\n";
  }
  if (format == "svg") return render_svg(title, {envelope_curve(label, e)});
  return envelope_to_csv(e);
}

json params_json(const StandardZic& c) { return {{"P1", c.P1}, {"P2", c.P2}, {"K", c.K}, {"b", c.b}}; }

// ------------------------------------------------------------ figures

struct FigureDef {
  StandardZic c;
  std::vector<std::string> regions;
};

const std::map<std::string, FigureDef>& figures() {
  static const std::map<std::string, FigureDef> defs{
      {"fig5a", {{6, 6, 1.5, 1.5}, {"r1", "r3"}}},
      {"fig5b", {{6, 6, 2.0, 1.5}, {"r1", "r3"}}},
      {"fig5c", {{6, 6, 3.0, 1.5}, {"r1", "r3"}}},
      {"fig6a", {{6, 6, 1.5, 1.5}, {"r1", "r3", "r4"}}},
      {"fig6b", {{6, 6, 2.0, 1.5}, {"r1", "r3", "r4"}}},
      {"fig6c", {{6, 6, 3.0, 1.5}, {"r1", "r3", "r4"}}},
      {"fig7a", {{6, 6, 2.0, 0.6}, {"r3", "r4", "r5"}}},
      {"fig7b", {{6, 6, 1.0, 0.6}, {"r3", "r4", "r5"}}},
      {"fig7c", {{6, 6, 0.9, 0.6}, {"r3", "r4", "r5"}}},
      {"fig8a", {{6, 6, 1.0, 0.6}, {"r5", "r4", "outer"}}},
      {"fig8b", {{6, 6, 1.2, 0.6}, {"r5", "r4", "outer"}}},
  };
  return defs;
}

struct Relation {
  std::string a, b;
  double tol;
};

std::vector<Relation> figure_relations(const std::string& id) {
  switch (id[3]) {
    case '5': return {{"r1", "r3", 1e-6}, {"r3", "r1", 1e-6}};
    case '6': return {{"r1", "r4", 5e-3}, {"r3", "r4", 5e-3}};
    case '7': return {{"r3", "r5", 5e-3}, {"r5", "r3", 5e-3}, {"r3", "r4", 5e-3}, {"r5", "r4", 5e-3}};
    default: return {{"r4", "outer", 5e-3}, {"r5", "outer", 5e-3}};
  }
}

// ------------------------------------------------------------ discrete

struct SearchOptions {
  std::size_t restarts = 500;
  std::size_t grid_levels = 4;
  std::string weights = "1,0;2,1;1,1;1,2;0,1";
  std::uint64_t seed = 1;
  bool exhaustive = false;
  std::size_t aux_card = 4;
  std::string config;
};

void apply_search_config(SearchOptions& o, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "restarts") o.restarts = v.get<std::size_t>();
      else if (key == "grid_levels") o.grid_levels = v.get<std::size_t>();
      else if (key == "seed") o.seed = v.get<std::uint64_t>();
      else if (key == "exhaustive") o.exhaustive = v.get<bool>();
      else if (key == "aux_card") o.aux_card = v.get<std::size_t>();
      else if (key == "weight_sweep") {
        std::string s;
        for (const auto& w : v) {
          if (!w.is_array() || w.size() != 2) throw Error(ErrorCode::ParseError, "weight_sweep holds [w1, w2] pairs");
          s += fmt(w[0].get<double>(), "%.17g") + "," + fmt(w[1].get<double>(), "%.17g") + ";";
        }
        o.weights = s;
      } else {
        throw Error(ErrorCode::ParseError, "unknown config key " + key);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "config key " + key + ": " + e.what());
    }
  }
}

SearchConfig make_search_config(const SearchOptions& o) {
  SearchConfig c;
  c.restarts = o.restarts;
  c.grid_levels = o.grid_levels;
  c.weight_sweep = parse_weights(o.weights);
  c.seed = o.seed;
  c.exhaustive = o.exhaustive;
  validate(c);
  return c;
}

json polygon_json(const HalfPlaneSystem& poly) {
  json verts = json::array();
  for (auto v : polygon_vertices(poly)) verts.push_back({v.r1 + 0.0, v.r2 + 0.0});
  return verts;
}

std::string polygon_csv(const HalfPlaneSystem& poly) {
  std::string s = "r1,r2\n";
  // Adding zero turns -0 into +0.
  for (auto v : polygon_vertices(poly)) s += fmt(v.r1 + 0.0) + "," + fmt(v.r2 + 0.0) + "\n";
  return s;
}

int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::IoError) return kExitIo;
  if (e.code() == ErrorCode::ParseError) return kExitParse;
  return kExitPrecondition;
}

}  // namespace

SvgCurve envelope_curve(const std::string& label, const Envelope& e) {
  SvgCurve c{label, {}};
  for (std::size_t i = 0; i < e.size(); ++i) c.points.push_back({e.r1_grid()[i], e.r2_max()[i]});
  if (e.r2_max().back() > 0.0) c.points.push_back({e.r1_max(), 0.0});
  return c;
}

std::string render_svg(const std::string& title, const std::vector<SvgCurve>& curves,
                       const std::vector<SvgMarker>& markers) {
  const double W = 800, H = 600, left = 80, right = 160, top = 50, bottom = 70;
  double xmax = 0.0, ymax = 0.0;
  for (const auto& c : curves)
    for (auto p : c.points) {
      xmax = std::max(xmax, p.r1);
      ymax = std::max(ymax, p.r2);
    }
  for (const auto& m : markers) {
    xmax = std::max(xmax, m.point.r1);
    ymax = std::max(ymax, m.point.r2);
  }
  double xs = nice_step(xmax > 0 ? xmax : 1.0), ys = nice_step(ymax > 0 ? ymax : 1.0);
  xmax = std::ceil((xmax > 0 ? xmax : 1.0) / xs) * xs;
  ymax = std::ceil((ymax > 0 ? ymax : 1.0) / ys) * ys;
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](double v) { return left + v / xmax * pw; };
  auto Y = [&](double v) { return top + ph - v / ymax * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  s << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  s << "<text x=\"" << fmt(left + pw / 2, "%.2f") << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
    << escape_xml(title) << "</text>\n";
  s << "<g stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << fmt(left, "%.2f") << "\" y1=\"" << fmt(top + ph, "%.2f") << "\" x2=\"" << fmt(left + pw, "%.2f")
    << "\" y2=\"" << fmt(top + ph, "%.2f") << "\"/>\n";
  s << "<line x1=\"" << fmt(left, "%.2f") << "\" y1=\"" << fmt(top, "%.2f") << "\" x2=\"" << fmt(left, "%.2f")
    << "\" y2=\"" << fmt(top + ph, "%.2f") << "\"/>\n";
  s << "</g>\n<g font-size=\"12\">\n";
  for (double v = 0.0; v <= xmax + 1e-9 * xmax; v += xs)
    s << "<text x=\"" << fmt(X(v), "%.2f") << "\" y=\"" << fmt(top + ph + 18, "%.2f")
      << "\" text-anchor=\"middle\">" << fmt(v, "%g") << "</text>\n";
  for (double v = 0.0; v <= ymax + 1e-9 * ymax; v += ys)
    s << "<text x=\"" << fmt(left - 8, "%.2f") << "\" y=\"" << fmt(Y(v) + 4, "%.2f") << "\" text-anchor=\"end\">"
      << fmt(v, "%g") << "</text>\n";
  s << "<text x=\"" << fmt(left + pw / 2, "%.2f") << "\" y=\"" << fmt(H - 20, "%.2f")
    << "\" text-anchor=\"middle\">R1 (bits)</text>\n";
  s << "<text x=\"20\" y=\"" << fmt(top + ph / 2, "%.2f") << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << fmt(top + ph / 2, "%.2f") << ")\">R2 (bits)</text>\n";
  s << "</g>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < curves[i].points.size(); ++k) {
      auto p = curves[i].points[k];
      s << (k ? " " : "") << fmt(X(p.r1), "%.2f") << "," << fmt(Y(p.r2), "%.2f");
    }
    s << "\"/>\n";
    double ly = top + 20.0 + 22.0 * static_cast<double>(i);
    s << "<line x1=\"" << fmt(W - right + 15, "%.2f") << "\" y1=\"" << fmt(ly, "%.2f") << "\" x2=\""
      << fmt(W - right + 45, "%.2f") << "\" y2=\"" << fmt(ly, "%.2f") << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fmt(W - right + 52, "%.2f") << "\" y=\"" << fmt(ly + 4, "%.2f") << "\" font-size=\"13\">"
      << escape_xml(curves[i].label) << "</text>\n";
  }
  for (const auto& m : markers) {
    s << "<circle cx=\"" << fmt(X(m.point.r1), "%.2f") << "\" cy=\"" << fmt(Y(m.point.r2), "%.2f")
      << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    s << "<text x=\"" << fmt(X(m.point.r1) + 8, "%.2f") << "\" y=\"" << fmt(Y(m.point.r2) - 8, "%.2f")
      << "\" font-size=\"12\">" << escape_xml(m.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate regions of cognitive interference channels"};
  app.require_subcommand(1);
  std::string format = "csv";

  // region
  GaussianOptions gopt;
  std::string region_name, region_out;
  auto* region = app.add_subcommand("region", "Gaussian cognitive Z channel region as an envelope");
  region->add_option("name", region_name, "r1, r2, r3, r4, r5 or outer")
      ->required()
      ->check(CLI::IsMember({"r1", "r2", "r3", "r4", "r5", "outer"}));
  auto add_gaussian = [&](CLI::App* sub) {
    sub->add_option("--p1", gopt.p1, "power P1 (linear)");
    sub->add_option("--p2", gopt.p2, "power P2 (linear)");
    sub->add_option("--k", gopt.k, "cognitive link gain K");
    sub->add_option("--b", gopt.b, "cross gain b");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--samples", gopt.samples, "R1 samples per envelope");
    sub->add_option("--alpha-steps", gopt.alpha_steps);
    sub->add_option("--beta-steps", gopt.beta_steps);
    sub->add_option("--mu-steps", gopt.mu_steps);
    sub->add_flag("--coarse", gopt.coarse, "plain grid union without local refinement");
    sub->add_option("--config", gopt.config, "JSON file with P1, P2, K, b and grid keys");
  };
  add_gaussian(region);
  add_grid(region);
  region->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "svg"}));
  region->add_option("-o,--out", region_out, "output file (default: stdout)");

  // figure
  std::string figure_id, figure_dir = ".";
  auto* figure = app.add_subcommand("figure", "all curves of one figure plus an overlay plot");
  std::vector<std::string> fig_ids;
  for (const auto& [id, def] : figures()) fig_ids.push_back(id);
  figure->add_option("id", figure_id)->required()->check(CLI::IsMember(fig_ids));
  figure->add_option("-o,--out", figure_dir, "output directory");
  figure->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  add_grid(figure);

  // fm
  std::string fm_input, fm_keep, fm_out;
  bool fm_exact = false;
  auto* fm = app.add_subcommand("fm", "project a linear system by Fourier-Motzkin elimination");
  fm->add_option("system", fm_input, "JSON system file")->required();
  fm->add_option("--keep", fm_keep, "comma-separated variables to keep")->required();
  fm->add_flag("--exact", fm_exact, "exact rational arithmetic");
  fm->add_option("-o,--out", fm_out, "output file (default: stdout)");

  // discrete
  std::string spec_id, pmf_path, channel_path, discrete_out, check_case;
  auto* discrete = app.add_subcommand("discrete", "evaluate a discrete region on a pmf and channel");
  discrete->add_option("spec", spec_id, "registered region id")->required();
  discrete->add_option("--pmf", pmf_path, "pmf JSON file")->required();
  discrete->add_option("--channel", channel_path, "channel JSON file")->required();
  discrete->add_option("--check", check_case, "run a reduction check instead (strong, weak, wu, ...)");
  discrete->add_option("-o,--out", discrete_out, "output directory for system JSON and polygon CSV");

  // search
  SearchOptions sopt;
  std::string search_spec, search_channel, search_out, single_weight, family_name = "default";
  auto* search = app.add_subcommand("search", "frontier of a discrete region by distribution search");
  search->add_option("spec", search_spec, "registered region id")->required();
  search->add_option("--channel", search_channel, "channel JSON file")->required();
  search->add_option("--restarts", sopt.restarts);
  search->add_option("--grid-levels", sopt.grid_levels);
  search->add_option("--weights", sopt.weights, "weight sweep, e.g. \"1,0;1,1;0,1\"");
  search->add_option("--seed", sopt.seed);
  search->add_flag("--exhaustive", sopt.exhaustive);
  search->add_option("--aux-card", sopt.aux_card, "letters of the free auxiliary U");
  search->add_option("--family", family_name, "default, semidet-inner or semidet")
      ->check(CLI::IsMember({"default", "semidet-inner", "semidet"}));
  search->add_option("--maximize", single_weight, "report the best point for one weight pair w1,w2");
  search->add_option("--config", sopt.config, "JSON search configuration");
  search->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "svg"}));
  search->add_option("-o,--out", search_out, "output file (default: stdout)");

  // compare
  std::string cmp_a, cmp_b;
  double cmp_tol = 5e-3;
  auto* compare = app.add_subcommand("compare", "subset relations between two envelope CSV files");
  compare->add_option("a", cmp_a)->required();
  compare->add_option("b", cmp_b)->required();
  compare->add_option("--tol", cmp_tol);
  compare->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!gopt.config.empty()) apply_gaussian_config(gopt, read_json(gopt.config));
    if (!sopt.config.empty()) apply_search_config(sopt, read_json(sopt.config));
    // Explicit flags win over the config file.
    if (!gopt.config.empty()) {
      CLI::App* sub = region->parsed() ? region : figure;
      for (auto* o : sub->get_options()) {
        if (o->count() == 0) continue;
        const auto& n = o->get_name();
        if (n == "--p1") gopt.p1 = o->as<double>();
        if (n == "--p2") gopt.p2 = o->as<double>();
        if (n == "--k") gopt.k = o->as<double>();
        if (n == "--b") gopt.b = o->as<double>();
        if (n == "--samples") gopt.samples = o->as<std::size_t>();
        if (n == "--alpha-steps") gopt.alpha_steps = o->as<std::size_t>();
        if (n == "--beta-steps") gopt.beta_steps = o->as<std::size_t>();
        if (n == "--mu-steps") gopt.mu_steps = o->as<std::size_t>();
        if (n == "--coarse") gopt.coarse = true;
      }
    }
    if (!sopt.config.empty()) {
      for (auto* o : search->get_options()) {
        if (o->count() == 0) continue;
        const auto& n = o->get_name();
        if (n == "--restarts") sopt.restarts = o->as<std::size_t>();
        if (n == "--grid-levels") sopt.grid_levels = o->as<std::size_t>();
        if (n == "--weights") sopt.weights = o->as<std::string>();
        if (n == "--seed") sopt.seed = o->as<std::uint64_t>();
        if (n == "--exhaustive") sopt.exhaustive = true;
        if (n == "--aux-card") sopt.aux_card = o->as<std::size_t>();
      }
    }

    if (region->parsed()) {
      StandardZic c{gopt.p1, gopt.p2, gopt.k, gopt.b};
      validate(c);
      Envelope e = gaussian_region(region_name, c, make_grid(gopt));
      json meta{{"region", region_name}, {"params", params_json(c)}};
      std::string title = display_name(region_name) + "  P1=" + fmt(c.P1, "%g") + " P2=" + fmt(c.P2, "%g") +
                          " K=" + fmt(c.K, "%g") + " b=" + fmt(c.b, "%g");
      emit(region_out, output_for(format, title, display_name(region_name), e, meta), out);
    } else if (figure->parsed()) {
      const FigureDef& def = figures().at(figure_id);
      SweepGrid g = make_grid(gopt);
      ensure_dir(figure_dir);
      std::map<std::string, Envelope> env;
      std::vector<double> extra;
      std::vector<SvgCurve> curves;
      for (const auto& r : def.regions) {
        Envelope e = gaussian_region(r, def.c, g, extra);
        // Later curves are sampled at the first curve's breakpoints too, so
        // that subset tests compare aligned grids.
        if (extra.empty()) extra.assign(e.r1_grid().begin(), e.r1_grid().end());
        emit((fs::path(figure_dir) / (figure_id + "_" + display_name(r) + ".csv")).string(), envelope_to_csv(e), out);
        curves.push_back(envelope_curve(display_name(r), e));
        env.emplace(r, std::move(e));
      }
      std::vector<SvgMarker> markers;
      json report{{"figure", figure_id}, {"params", params_json(def.c)}, {"relations", json::array()}};
      std::ostringstream text;
      for (const auto& rel : figure_relations(figure_id)) {
        auto s = subset(env.at(rel.a), env.at(rel.b), rel.tol);
        report["relations"].push_back({{"subset", display_name(rel.a)},
                                       {"of", display_name(rel.b)},
                                       {"tol", rel.tol},
                                       {"holds", s.holds},
                                       {"max_violation", s.max_violation}});
        text << "subset," << display_name(rel.a) << "," << display_name(rel.b) << "," << fmt(rel.tol, "%g") << ","
             << (s.holds ? "yes" : "no") << "," << fmt(s.max_violation, "%.6g") << "\n";
      }
      if (figure_id[3] == '7') {
        double d = max_deviation(env.at("r3"), env.at("r5"));
        report["max_deviation_R3_R5"] = d;
        text << "deviation,R3,R5," << fmt(d, "%.6g") << "\n";
      }
      if (figure_id[3] == '8') {
        RatePair p = corollary_point(def.c);
        markers.push_back({"(C1, g(P2/(1+b^2 P1)))", p});
        double ro = env.at("outer").value_at(p.r1), r5 = env.at("r5").value_at(p.r1);
        report["corner"] = {{"r1", p.r1}, {"r2", p.r2}, {"outer_at_r1", ro}, {"r5_at_r1", r5}};
        text << "corner," << fmt(p.r1, "%.9g") << "," << fmt(p.r2, "%.9g") << ",Ro=" << fmt(ro, "%.9g")
             << ",R5=" << fmt(r5, "%.9g") << "\n";
      }
      std::string title = figure_id + ": P1=" + fmt(def.c.P1, "%g") + " P2=" + fmt(def.c.P2, "%g") +
                          " K=" + fmt(def.c.K, "%g") + " b=" + fmt(def.c.b, "%g");
      emit((fs::path(figure_dir) / (figure_id + ".svg")).string(), render_svg(title, curves, markers), out);
      if (format == "json") out << report.dump(2) << "\n";
      else out << "relation,a,b,tol,holds,value\n" << text.str();
    } else if (fm->parsed()) {
      HalfPlaneSystem sys = system_from_json(read_file(fm_input));
      auto keep = split_list(fm_keep, ',');
      for (const auto& k : keep) sys.require_index(k);
      auto rep = project(sys, keep, fm_exact ? Arithmetic::ExactRational : Arithmetic::Floating);
      emit(fm_out, report_to_json(rep) + "\n", out);
    } else if (discrete->parsed()) {
      JointPmf p = pmf_from_json(read_file(pmf_path));
      DiscreteChannel ch = channel_from_json(read_file(channel_path));
      if (!check_case.empty()) {
        auto r = check_reduction(check_case, p, ch);
        json j{{"case", r.case_id},     {"relation", r.relation},   {"asserted", r.asserted},
               {"holds", r.holds},      {"max_gap", r.max_gap},     {"admissible", r.admissible},
               {"condition_holds", r.condition_holds}, {"details", r.details}};
        out << (r.asserted ? (r.holds ? "PASS" : "FAIL") : "REPORT") << " " << r.case_id << " max_gap="
            << fmt(r.max_gap, "%.3g") << "\n"
            << j.dump(2) << "\n";
      } else {
        const RegionSpec& spec = registered_spec(spec_id);
        auto ev = eval_region(spec, p, ch);
        auto poly = rate_polygon(ev);
        json rows = json::array();
        for (std::size_t i = 0; i < ev.rows.size(); ++i)
          rows.push_back({{"row", ev.rows[i].text}, {"value", ev.row_values[i]}});
        json j{{"spec", spec.id},
               {"admissible", ev.admissible()},
               {"rows", rows},
               {"system", json::parse(system_to_json(ev.system))},
               {"polygon", json::parse(system_to_json(poly))},
               {"vertices", polygon_json(poly)}};
        if (discrete_out.empty()) {
          out << j.dump(2) << "\n";
        } else {
          ensure_dir(discrete_out);
          emit((fs::path(discrete_out) / (spec.id + "_report.json")).string(), j.dump(2) + "\n", out);
          emit((fs::path(discrete_out) / (spec.id + "_system.json")).string(), system_to_json(ev.system) + "\n", out);
          emit((fs::path(discrete_out) / (spec.id + "_polygon.csv")).string(), polygon_csv(poly), out);
        }
      }
    } else if (search->parsed()) {
      const RegionSpec& spec = registered_spec(search_spec);
      DiscreteChannel ch = channel_from_json(read_file(search_channel));
      SearchConfig cfg = make_search_config(sopt);
      DistributionFamily fam = family_name == "default" ? default_family(spec.id, ch, sopt.aux_card)
                                                        : semidet_family(ch, family_name == "semidet-inner");
      if (!single_weight.empty()) {
        auto w = parse_weights(single_weight);
        if (w.size() != 1) throw Error(ErrorCode::ParseError, "--maximize takes one pair w1,w2");
        auto r = maximize_weighted_rate(spec, ch, fam, w[0], cfg);
        json j{{"spec", spec.id},
               {"weights", {w[0][0], w[0][1]}},
               {"value", r.value},
               {"point", {r.point.r1, r.point.r2}},
               {"evaluations", r.evaluations},
               {"argmax", json::parse(pmf_to_json(r.argmax))}};
        emit(search_out, j.dump(2) + "\n", out);
      } else {
        Envelope e = frontier(spec, ch, fam, cfg);
        json meta{{"spec", spec.id}, {"restarts", cfg.restarts}, {"seed", cfg.seed}, {"exhaustive", cfg.exhaustive}};
        emit(search_out, output_for(format, spec.id + " frontier", spec.id, e, meta), out);
      }
    } else if (compare->parsed()) {
      auto load = [](const std::string& path) {
        std::istringstream in(read_file(path));
        return read_envelope_csv(in);
      };
      Envelope a = load(cmp_a), b = load(cmp_b);
      auto ab = subset(a, b, cmp_tol), ba = subset(b, a, cmp_tol);
      double dev = max_deviation(a, b);
      if (format == "json") {
        json j{{"a_in_b", {{"holds", ab.holds}, {"max_violation", ab.max_violation}}},
               {"b_in_a", {{"holds", ba.holds}, {"max_violation", ba.max_violation}}},
               {"max_deviation", dev},
               {"tol", cmp_tol}};
        out << j.dump(2) << "\n";
      } else {
        out << "relation,holds,value\n";
        out << "a_in_b," << (ab.holds ? "yes" : "no") << "," << fmt(ab.max_violation, "%.6g") << "\n";
        out << "b_in_a," << (ba.holds ? "yes" : "no") << "," << fmt(ba.max_violation, "%.6g") << "\n";
        out << "max_deviation,," << fmt(dev, "%.6g") << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace cogrates::cli
