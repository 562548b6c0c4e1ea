#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ramsey/cst.hpp"
#include "ramsey/groundset.hpp"
#include "ramsey/hindman.hpp"
#include "ramsey/jsonio.hpp"
#include "ramsey/parse.hpp"
#include "ramsey/search.hpp"

namespace ramsey::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string command;
  std::string set_expr;
  std::string parts;
  std::string colors = "parity";
  std::string polys;
  std::string frags;
  std::string seqs;
  std::string windows;
  std::string tree_path;
  std::string out_path;
  std::string format = "json";
  std::string verify_only;
  std::string config_path;
  std::int64_t n = 0;
  std::int64_t max_a = -1;
  std::int64_t max_d = -1;
  std::int64_t grid = 12;
  std::uint64_t seed = 0;
  unsigned max_subset = 16;
  unsigned depth = 2;
  unsigned trunc = 8;
  unsigned workers = 1;
  std::uint32_t min_index = 0;
  std::int64_t member_x = -1;
  std::string member_range;
  unsigned block_count = 16;
  bool allow_zero = false;
  bool fast = false;
  bool stable = false;
};

json options_to_json(const Options& o) {
  json j;
  j["command"] = o.command;
  if (!o.set_expr.empty()) j["set"] = o.set_expr;
  if (!o.parts.empty()) j["parts"] = o.parts;
  if (o.command == "search.pvdw") j["colors"] = o.colors;
  if (!o.polys.empty()) j["polys"] = o.polys;
  if (!o.frags.empty()) j["frags"] = o.frags;
  if (!o.seqs.empty()) j["seqs"] = o.seqs;
  if (!o.windows.empty()) j["windows"] = o.windows;
  if (!o.tree_path.empty()) j["tree"] = o.tree_path;
  j["n"] = o.n;
  j["max_a"] = o.max_a;
  j["max_d"] = o.max_d;
  if (o.command == "search.partition") j["grid"] = o.grid;
  j["seed"] = o.seed;
  j["max_subset"] = o.max_subset;
  if (o.command.rfind("cst", 0) == 0) {
    j["depth"] = o.depth;
    j["trunc"] = o.trunc;
  }
  j["workers"] = o.workers;
  if (o.command == "hindman.witness") j["min_index"] = o.min_index;
  j["allow_zero"] = o.allow_zero;
  j["format"] = o.format;
  return j;
}

// Execution knobs (worker count, output format) do not change what was
// searched, so they stay out of the parameter digest.
std::string digest_for(const Options& o) {
  json j = options_to_json(o);
  j.erase("workers");
  j.erase("format");
  return params_digest(j.dump());
}

class Emitter {
 public:
  Emitter(const std::string& out_path, std::ostream& fallback) : fallback_(fallback) {
    if (!out_path.empty()) {
      file_.open(out_path);
      if (!file_) throw std::runtime_error("cannot open output file: " + out_path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }
  void line(const std::string& s) { stream() << s << "\n"; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

// Defaults depending on the window are resolved before digests are taken,
// so the summary embeds the actual bounds used.
void resolve_defaults(Options& o) {
  if (o.max_a < 0) o.max_a = std::max<std::int64_t>(o.n, 1);
  if (o.max_d < 0)
    o.max_d = std::max<std::int64_t>(std::min<std::int64_t>(o.n, 4096), 1);
}

SearchBounds bounds_from(const Options& o) {
  SearchBounds b;
  b.max_a = o.max_a;
  b.max_d = o.max_d;
  b.max_subset_bits = o.max_subset;
  b.workers = o.workers;
  return b;
}

Coloring parse_colors(const std::string& spec, std::int64_t n) {
  if (spec == "parity") return Coloring::parity(n);
  if (spec == "mono") return Coloring::monochrome(n);
  if (spec.rfind("set(", 0) == 0 && spec.back() == ')') {
    SetExpr e = parse_set_expr(spec.substr(4, spec.size() - 5));
    return Coloring::from_set(materialize(e, n));
  }
  // Explicit comma list of colors for 1..N.
  std::vector<std::uint16_t> color;
  std::stringstream ss(spec);
  std::string tok;
  unsigned r = 1;
  while (std::getline(ss, tok, ',')) {
    int c = std::stoi(tok);
    if (c < 1) throw std::invalid_argument("colors must be >= 1");
    r = std::max<unsigned>(r, static_cast<unsigned>(c));
    color.push_back(static_cast<std::uint16_t>(c));
  }
  return Coloring(n, r, std::move(color));
}

std::pair<std::string, std::string> split_top_level(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == ',' && depth == 0)
      return {s.substr(0, i), s.substr(i + 1)};
  }
  throw std::invalid_argument("--parts needs two comma-separated expressions");
}

std::vector<std::int64_t> parse_windows(const std::string& spec, std::int64_t n) {
  std::vector<std::int64_t> out;
  if (spec.empty()) {
    for (std::int64_t len = 64; len <= n; len *= 4) out.push_back(len);
    if (out.empty()) out.push_back(n);
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

cst::SeqFamily parse_seqs(const Options& o) {
  cst::SeqFamily fam;
  fam.trunc = o.trunc;
  std::vector<std::string> pieces;
  if (!o.seqs.empty()) {
    std::stringstream ss(o.seqs);
    std::string tok;
    while (std::getline(ss, tok, ';')) pieces.push_back(tok);
  } else {
    pieces.assign(o.depth, "1");
  }
  if (pieces.size() != o.depth)
    throw std::invalid_argument("--seqs must list exactly --depth sequences");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<Int> row;
    std::stringstream ss(pieces[i]);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      row.emplace_back(tok);
    }
    if (row.size() == 1) row.assign(o.trunc, row[0]);  // constant sequence
    if (row.size() != o.trunc)
      throw std::invalid_argument("sequence " + std::to_string(i + 1) +
                                  " must have length --trunc");
    fam.values.push_back(std::move(row));
    fam.names.push_back("f" + std::to_string(i + 1));
  }
  return fam;
}

json witness_payload(const SearchResult& res) {
  json j = witness_to_json(*res.witness);
  if (res.color) j["color"] = *res.color;
  return j;
}

int emit_summary(Emitter& em, const Options& o, int exit_code,
                 std::uint64_t records, double ms) {
  json j;
  j["op"] = "summary";
  j["config"] = options_to_json(o);
  j["exit"] = exit_code;
  j["records"] = records;
  j["elapsed_ms"] = o.stable ? 0.0 : ms;
  em.line(j.dump());
  return exit_code;
}

int run_set(const Options& o, Emitter& em) {
  auto start = std::chrono::steady_clock::now();
  MaterializeStats stats;
  GroundSet g = materialize(parse_set_expr(o.set_expr), o.n, &stats);
  std::string digest = digest_for(o);

  if (o.command == "set.materialize") {
    if (o.format == "tsv" || o.format == "csv") {
      for (std::int64_t v : g.elements()) em.line(std::to_string(v));
    }
    json payload;
    payload["n"] = o.n;
    payload["count"] = g.count();
    payload["ignored_out_of_window"] = stats.out_of_window_ignored;
    if (o.format == "json" && g.count() <= 4096) {
      json els = json::array();
      for (std::int64_t v : g.elements()) els.push_back(v);
      payload["elements"] = els;
    }
    em.line(record_line("set.materialize", digest, payload, elapsed_ms(start),
                        o.stable));
    return emit_summary(em, o, 0, 1, elapsed_ms(start));
  }

  // set.density
  std::vector<std::int64_t> lens = parse_windows(o.windows, o.n);
  auto curve = upper_density_curve(g, lens, o.workers);
  for (const DensityPoint& p : curve) {
    if (o.format == "csv") {
      em.line(std::to_string(p.window_len) + "," + std::to_string(p.max_count) +
              "," + std::to_string(p.window_len));
    } else {
      json payload;
      payload["window"] = p.window_len;
      payload["numerator"] = p.max_count;
      payload["denominator"] = p.window_len;
      em.line(record_line("set.density", digest, payload, elapsed_ms(start),
                          o.stable));
    }
  }
  return emit_summary(em, o, 0, curve.size(), elapsed_ms(start));
}

int run_search(const Options& o, Emitter& em) {
  auto start = std::chrono::steady_clock::now();
  std::string digest = digest_for(o);
  SearchBounds b = bounds_from(o);

  if (o.command == "search.pvdw") {
    Coloring c = parse_colors(o.colors, o.n);
    std::vector<Poly> polys = parse_poly_list(o.polys, o.allow_zero);
    SearchResult res = pvdw_search(c, polys, b);
    if (!res.found()) {
      json payload;
      payload["found"] = false;
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 1, 1, elapsed_ms(start));
    }
    em.line(record_line(o.command, digest, witness_payload(res), elapsed_ms(start),
                        o.stable));
    return emit_summary(em, o, 0, 1, elapsed_ms(start));
  }

  if (o.command == "search.partition") {
    auto [e1, e2] = split_top_level(o.parts);
    GroundSet p1 = materialize(parse_set_expr(e1), o.n);
    GroundSet p2 = materialize(parse_set_expr(e2), o.n);
    kernels::BitVec u(static_cast<std::size_t>(o.n));
    for (std::size_t i = 0; i < u.w.size(); ++i)
      u.w[i] = p1.bits().w[i] | p2.bits().w[i];
    GroundSet g(o.n, std::move(u), "union(" + e1 + "," + e2 + ")");
    std::vector<Poly> polys = parse_poly_list(o.polys, o.allow_zero);
    PartitionOptions popts;
    popts.grid = o.grid;
    popts.force_fast = o.fast;
    PartitionResult res = partition_experiment(g, p1, p2, polys, b, popts);
    json payload;
    payload["mode"] = res.trace.mode;
    if (res.found()) {
      payload["part"] = res.part;
      json jw = witness_to_json(*res.witness);
      for (auto& [k, v] : jw.items()) payload[k] = v;
      json trace;
      trace["base_x"] = res.trace.base_x;
      trace["base_y"] = res.trace.base_y;
      trace["family_size"] = res.trace.family_size;
      trace["z"] = res.trace.z;
      trace["w"] = res.trace.w;
      payload["trace"] = trace;
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 0, 1, elapsed_ms(start));
    }
    payload["found"] = false;
    payload["stage_failed"] = res.trace.stage_failed;
    em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
    return emit_summary(em, o, 1, 1, elapsed_ms(start));
  }

  GroundSet g = materialize(parse_set_expr(o.set_expr), o.n);
  SearchResult res;
  if (o.command == "search.jp" || o.command == "search.j" ||
      o.command == "search.rational") {
    std::vector<IPFragment> frags = parse_fragments(o.frags);
    if (o.command == "search.jp") {
      res = jp_witness_search(g, parse_poly_list(o.polys, o.allow_zero), frags, b);
    } else if (o.command == "search.j") {
      res = j_witness_search(g, frags, b);
    } else {
      RationalSearchResult rres =
          rational_search(g, parse_poly_list(o.polys, o.allow_zero), frags, b);
      res = std::move(rres.result);
      if (res.found()) {
        json payload = witness_payload(res);
        payload["scale"] = int_to_json(rres.scale);
        json blocks = json::array();
        for (const FinSet& blk : rres.blocks) {
          json jb = json::array();
          for (std::uint32_t t : blk.elems()) jb.push_back(t);
          blocks.push_back(jb);
        }
        payload["blocks"] = blocks;
        em.line(record_line(o.command, digest, payload, elapsed_ms(start),
                            o.stable));
        return emit_summary(em, o, 0, 1, elapsed_ms(start));
      }
    }
  } else if (o.command == "search.pprich") {
    res = pp_rich_search(g, parse_poly_list(o.polys, o.allow_zero), b);
  } else {
    throw std::invalid_argument("unknown search command");
  }

  if (!res.found()) {
    json payload;
    payload["found"] = false;
    em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
    return emit_summary(em, o, 1, 1, elapsed_ms(start));
  }
  em.line(record_line(o.command, digest, witness_payload(res), elapsed_ms(start),
                      o.stable));
  return emit_summary(em, o, 0, 1, elapsed_ms(start));
}

int run_hindman(const Options& o, Emitter& em) {
  auto start = std::chrono::steady_clock::now();
  std::string digest = digest_for(o);

  if (o.command == "hindman.blocks") {
    hindman::BlockSystem sys = hindman::BlockSystem::up_to_block(o.block_count);
    for (unsigned k = 0; k <= o.block_count; ++k) {
      if (o.format == "json") {
        json payload;
        payload["k"] = k;
        payload["b"] = sys.b(k);
        payload["size"] = sys.block_size(k);
        em.line(record_line(o.command, digest, payload, elapsed_ms(start),
                            o.stable));
      } else {
        em.line(std::to_string(k) + "\t" + std::to_string(sys.b(k)) + "\t" +
                std::to_string(sys.block_size(k)));
      }
    }
    return emit_summary(em, o, 0, o.block_count + 1, elapsed_ms(start));
  }

  if (o.command == "hindman.member") {
    hindman::BlockSystem sys = hindman::BlockSystem::up_to_bits(64);
    if (!o.member_range.empty()) {
      auto comma = o.member_range.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("--range needs LO,HI");
      std::int64_t lo = std::stoll(o.member_range.substr(0, comma));
      std::int64_t hi = std::stoll(o.member_range.substr(comma + 1));
      std::uint64_t members = 0;
      for (std::int64_t x = lo; x <= hi; ++x)
        if (sys.member_with_zero(Int(x))) ++members;
      json payload;
      payload["lo"] = lo;
      payload["hi"] = hi;
      payload["members"] = members;
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 0, 1, elapsed_ms(start));
    }
    if (o.member_x < 0) throw std::invalid_argument("hindman member needs X");
    bool member = sys.member(Int(o.member_x));
    json payload;
    payload["x"] = o.member_x;
    payload["member"] = member;
    payload["member_with_zero"] = sys.member_with_zero(Int(o.member_x));
    em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
    return emit_summary(em, o, member ? 0 : 1, 1, elapsed_ms(start));
  }

  if (o.command == "hindman.density") {
    std::vector<std::int64_t> lens = parse_windows(o.windows, o.n);
    auto curve = hindman::density_report(o.n, lens, o.workers);
    for (const DensityPoint& p : curve) {
      if (o.format == "csv") {
        em.line(std::to_string(p.window_len) + "," + std::to_string(p.max_count) +
                "," + std::to_string(p.window_len));
      } else {
        json payload;
        payload["window"] = p.window_len;
        payload["numerator"] = p.max_count;
        payload["denominator"] = p.window_len;
        em.line(record_line(o.command, digest, payload, elapsed_ms(start),
                            o.stable));
      }
    }
    return emit_summary(em, o, 0, curve.size(), elapsed_ms(start));
  }

  if (o.command == "hindman.witness") {
    std::vector<Poly> polys = parse_poly_list(o.polys, o.allow_zero);
    std::vector<IPFragment> frags = parse_fragments(o.frags);
    try {
      hindman::GreedyTrace trace;
      Witness w = hindman::greedy_witness(polys, frags, o.min_index, &trace);
      json payload = witness_to_json(w);
      payload["block_k"] = trace.k;
      payload["block_j"] = trace.j;
      payload["seed_c"] = int_to_json(trace.c);
      payload["backtracks"] = trace.backtracks;
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 0, 1, elapsed_ms(start));
    } catch (const hindman::InsufficientFragment& e) {
      json payload;
      payload["found"] = false;
      payload["error"] = "insufficient_fragment";
      payload["have"] = e.have();
      payload["needed"] = int_to_json(e.needed());
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 1, 1, elapsed_ms(start));
    } catch (const hindman::GreedyExhausted& e) {
      json payload;
      payload["found"] = false;
      payload["error"] = "greedy_exhausted";
      payload["block"] = e.block();
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 1, 1, elapsed_ms(start));
    }
  }
  throw std::invalid_argument("unknown hindman command");
}

int run_cst(const Options& o, Emitter& em) {
  auto start = std::chrono::steady_clock::now();
  std::string digest = digest_for(o);
  GroundSet g = materialize(parse_set_expr(o.set_expr), o.n);
  std::vector<Poly> polys = parse_poly_list(o.polys, o.allow_zero);
  cst::SeqFamily fam = parse_seqs(o);
  SearchBounds b = bounds_from(o);

  if (o.command == "cst.build") {
    cst::BuildOutcome outcome = cst_build(g, polys, fam, b);
    if (!outcome.ok()) {
      json payload;
      payload["built"] = false;
      payload["exhausted_subset"] = *outcome.exhausted_subset;
      payload["reason"] = outcome.exhausted_reason;
      em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
      return emit_summary(em, o, 1, 1, elapsed_ms(start));
    }
    cst::VerifyReport rep = cst_verify(*outcome.tree, g, polys, fam);
    json payload;
    payload["built"] = true;
    json jt = cst::tree_to_json(*outcome.tree);
    jt["report"] = cst::report_to_json(rep);
    payload["tree"] = jt;
    em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
    return emit_summary(em, o, rep.passed() ? 0 : 1, 1, elapsed_ms(start));
  }

  // cst.verify reads a previously built tree.
  std::ifstream in(o.tree_path);
  if (!in) throw std::invalid_argument("cannot open tree file: " + o.tree_path);
  json jt;
  in >> jt;
  if (jt.contains("tree")) jt = jt["tree"];  // accept a full build record
  cst::CstTree tree = cst::tree_from_json(jt);
  cst::VerifyReport rep = cst_verify(tree, g, polys, fam);
  json payload;
  payload["report"] = cst::report_to_json(rep);
  em.line(record_line(o.command, digest, payload, elapsed_ms(start), o.stable));
  return emit_summary(em, o, rep.passed() ? 0 : 1, 1, elapsed_ms(start));
}

int run_verify_only(const Options& o, Emitter& em) {
  auto start = std::chrono::steady_clock::now();
  std::ifstream in(o.verify_only);
  if (!in) throw std::invalid_argument("cannot open records file: " + o.verify_only);
  std::vector<json> records;
  json summary;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.value("op", "") == "summary") summary = j;
    else records.push_back(j);
  }
  if (summary.is_null())
    throw std::invalid_argument("records file has no summary record");
  json cfg = summary.at("config");

  std::uint64_t checked = 0, passed = 0;
  for (const json& rec : records) {
    std::string op = rec.value("op", "");
    if (!rec.contains("audit")) continue;
    ++checked;
    Witness w = witness_from_json(rec);
    bool ok = false;
    if (op == "search.pvdw") {
      Coloring c = parse_colors(cfg.value("colors", "parity"),
                                cfg.at("n").get<std::int64_t>());
      unsigned color = rec.value("color", 0u);
      ok = !w.audit.empty();
      for (const AuditEntry& e : w.audit) {
        if (!fits_i64(e.value) || to_i64(e.value) < 1 ||
            to_i64(e.value) > c.window() ||
            c.color_of(to_i64(e.value)) != color) {
          ok = false;
          break;
        }
      }
    } else if (op == "search.partition") {
      auto [e1, e2] = split_top_level(cfg.at("parts").get<std::string>());
      std::string expr = rec.value("part", 1u) == 1 ? e1 : e2;
      GroundSet part =
          materialize(parse_set_expr(expr), cfg.at("n").get<std::int64_t>());
      ok = verify_witness_against(part, w);
    } else if (op == "hindman.witness") {
      hindman::BlockSystem sys = hindman::BlockSystem::up_to_bits(4096);
      ok = !w.audit.empty();
      for (const AuditEntry& e : w.audit)
        if (!sys.member_with_zero(e.value)) ok = false;
    } else {
      GroundSet g = materialize(parse_set_expr(cfg.at("set").get<std::string>()),
                                cfg.at("n").get<std::int64_t>());
      ok = verify_witness_against(g, w);
    }
    if (ok) ++passed;
  }
  json payload;
  payload["checked"] = checked;
  payload["passed"] = passed;
  em.line(record_line("verify_only", params_digest(o.verify_only), payload,
                      elapsed_ms(start), o.stable));
  int code = (checked == passed && checked > 0) ? 0 : 1;
  return emit_summary(em, o, code, 1, elapsed_ms(start));
}

void apply_config_file(Options& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
  json j;
  in >> j;
  // Flags override the file: only fill fields still at their defaults.
  Options defaults;
  auto fill_str = [&](const char* key, std::string Options::*field,
                      const std::string& def) {
    if (j.contains(key) && o.*field == def) o.*field = j[key].get<std::string>();
  };
  fill_str("set", &Options::set_expr, defaults.set_expr);
  fill_str("parts", &Options::parts, defaults.parts);
  fill_str("colors", &Options::colors, defaults.colors);
  fill_str("polys", &Options::polys, defaults.polys);
  fill_str("frags", &Options::frags, defaults.frags);
  fill_str("seqs", &Options::seqs, defaults.seqs);
  fill_str("windows", &Options::windows, defaults.windows);
  fill_str("format", &Options::format, defaults.format);
  if (j.contains("n") && o.n == defaults.n) o.n = j["n"].get<std::int64_t>();
  if (j.contains("max_a") && o.max_a == defaults.max_a)
    o.max_a = j["max_a"].get<std::int64_t>();
  if (j.contains("max_d") && o.max_d == defaults.max_d)
    o.max_d = j["max_d"].get<std::int64_t>();
  if (j.contains("grid") && o.grid == defaults.grid)
    o.grid = j["grid"].get<std::int64_t>();
  if (j.contains("seed") && o.seed == defaults.seed)
    o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("max_subset") && o.max_subset == defaults.max_subset)
    o.max_subset = j["max_subset"].get<unsigned>();
  if (j.contains("depth") && o.depth == defaults.depth)
    o.depth = j["depth"].get<unsigned>();
  if (j.contains("trunc") && o.trunc == defaults.trunc)
    o.trunc = j["trunc"].get<unsigned>();
  if (j.contains("workers") && o.workers == defaults.workers)
    o.workers = j["workers"].get<unsigned>();
  if (j.contains("allow_zero") && o.allow_zero == defaults.allow_zero)
    o.allow_zero = j["allow_zero"].get<bool>();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"finite witness search over polynomial Ramsey configurations"};
  app.require_subcommand(0, 1);

  app.add_option("--config", o.config_path, "JSON config file (flags override)");
  app.add_option("--verify-only", o.verify_only,
                 "re-verify a previously emitted records file");
  app.add_option("--out", o.out_path, "write records to a file instead of stdout");
  app.add_option("--format", o.format, "json | tsv | csv");
  app.add_option("--workers", o.workers, "worker threads for searches");
  app.add_flag("--stable", o.stable, "zero timing fields for byte-compare runs");

  auto add_common = [&](CLI::App* cmd, bool with_set) {
    if (with_set) cmd->add_option("--set", o.set_expr, "set expression");
    cmd->add_option("--n", o.n, "window size");
    cmd->add_option("--max-a", o.max_a, "largest shift scanned");
    cmd->add_option("--max-d", o.max_d, "largest point/difference scanned");
    cmd->add_option("--max-subset", o.max_subset, "largest index usable in beta");
    cmd->add_option("--seed", o.seed, "seed echoed into the config");
    cmd->add_flag("--allow-zero", o.allow_zero, "admit the zero polynomial");
  };

  CLI::App* set = app.add_subcommand("set", "materialize and measure sets");
  CLI::App* set_mat = set->add_subcommand("materialize");
  add_common(set_mat, true);
  CLI::App* set_den = set->add_subcommand("density");
  add_common(set_den, true);
  set_den->add_option("--windows", o.windows, "comma-separated window lengths");

  CLI::App* search = app.add_subcommand("search", "witness searches");
  CLI::App* s_pvdw = search->add_subcommand("pvdw");
  add_common(s_pvdw, false);
  s_pvdw->add_option("--colors", o.colors, "parity | mono | set(EXPR) | list");
  s_pvdw->add_option("--polys", o.polys, "semicolon-separated polynomials");
  CLI::App* s_jp = search->add_subcommand("jp");
  add_common(s_jp, true);
  s_jp->add_option("--polys", o.polys, "semicolon-separated polynomials");
  s_jp->add_option("--frags", o.frags, "fragments: \"1,2,4; 3,5\"");
  CLI::App* s_j = search->add_subcommand("j");
  add_common(s_j, true);
  s_j->add_option("--frags", o.frags, "fragments");
  CLI::App* s_rat = search->add_subcommand("rational");
  add_common(s_rat, true);
  s_rat->add_option("--polys", o.polys, "rational-coefficient polynomials");
  s_rat->add_option("--frags", o.frags, "fragments");
  CLI::App* s_pp = search->add_subcommand("pprich");
  add_common(s_pp, true);
  s_pp->add_option("--polys", o.polys, "semicolon-separated polynomials");
  CLI::App* s_part = search->add_subcommand("partition");
  add_common(s_part, false);
  s_part->add_option("--parts", o.parts, "two set expressions, comma-separated");
  s_part->add_option("--polys", o.polys, "semicolon-separated polynomials");
  s_part->add_option("--grid", o.grid, "coefficient grid bound");
  s_part->add_flag("--fast", o.fast, "skip the proof-following mode");

  CLI::App* hind = app.add_subcommand("hindman", "block-structure toolkit");
  CLI::App* h_blocks = hind->add_subcommand("blocks");
  h_blocks->add_option("--count", o.block_count, "dump blocks 0..count");
  h_blocks->add_option("--format", o.format, "json | tsv");
  CLI::App* h_member = hind->add_subcommand("member");
  h_member->add_option("x", o.member_x, "value to test");
  h_member->add_option("--range", o.member_range, "count members in LO,HI");
  CLI::App* h_density = hind->add_subcommand("density");
  add_common(h_density, false);
  h_density->add_option("--windows", o.windows, "comma-separated window lengths");
  CLI::App* h_witness = hind->add_subcommand("witness");
  add_common(h_witness, false);
  h_witness->add_option("--polys", o.polys, "semicolon-separated polynomials");
  h_witness->add_option("--frags", o.frags, "fragments");
  h_witness->add_option("--min-index", o.min_index, "lower index bound for H");

  CLI::App* cstc = app.add_subcommand("cst", "tree builder and verifier");
  CLI::App* c_build = cstc->add_subcommand("build");
  add_common(c_build, true);
  c_build->add_option("--polys", o.polys, "semicolon-separated polynomials");
  c_build->add_option("--depth", o.depth, "root family size");
  c_build->add_option("--trunc", o.trunc, "sequence truncation length");
  c_build->add_option("--seqs", o.seqs, "semicolon-separated sequences");
  CLI::App* c_verify = cstc->add_subcommand("verify");
  add_common(c_verify, true);
  c_verify->add_option("--polys", o.polys, "semicolon-separated polynomials");
  c_verify->add_option("--depth", o.depth, "root family size");
  c_verify->add_option("--trunc", o.trunc, "sequence truncation length");
  c_verify->add_option("--seqs", o.seqs, "semicolon-separated sequences");
  c_verify->add_option("--tree", o.tree_path, "tree JSON to verify");

  // Top-level options (--out, --format, --workers, ...) are accepted after
  // subcommand names as well.
  for (CLI::App* top : app.get_subcommands({})) {
    top->fallthrough();
    for (CLI::App* sub : top->get_subcommands({})) sub->fallthrough();
  }

  std::vector<std::string> argv_stor = args;
  std::vector<const char*> argv;
  argv.push_back("polyramsey");
  for (const std::string& a : argv_stor) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  // Resolve the command name from the parsed subcommand chain.
  for (CLI::App* top : app.get_subcommands()) {
    o.command = top->get_name();
    for (CLI::App* sub : top->get_subcommands())
      o.command += "." + sub->get_name();
  }

  try {
    apply_config_file(o);
    resolve_defaults(o);
    Emitter em(o.out_path, out);
    if (!o.verify_only.empty()) return run_verify_only(o, em);
    if (o.command.empty()) {
      err << "error: missing subcommand (see --help)\n";
      return 2;
    }
    bool needs_window = o.command != "hindman.blocks" &&
                        o.command != "hindman.member" &&
                        o.command != "hindman.witness";
    if (o.n < 1 && needs_window) throw std::invalid_argument("--n must be >= 1");
    if (o.command.rfind("set.", 0) == 0) return run_set(o, em);
    if (o.command.rfind("search.", 0) == 0) return run_search(o, em);
    if (o.command.rfind("hindman.", 0) == 0) return run_hindman(o, em);
    if (o.command.rfind("cst.", 0) == 0) return run_cst(o, em);
    err << "error: unknown command " << o.command << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InsufficientFragmentError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const WindowOverflow& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace ramsey::cli
