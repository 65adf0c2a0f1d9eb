#include "fracqp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracqp/errors.hpp"

namespace fracqp::io {

using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string instance_to_json(const ProblemInstance& inst) {
  auto form = [](const EigenForm& f) {
    json pairs = json::array();
    for (const auto& p : f.pairs)
      pairs.push_back(json{{"eigenvalue", p.eigenvalue}, {"vector", p.vector}});
    return json{{"pairs", std::move(pairs)}};
  };
  json j{{"n", inst.n},
         {"alpha", inst.alpha},
         {"beta", inst.beta},
         {"A", form(inst.A)},
         {"B", form(inst.B)}};
  return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance JSON parse error: ") + e.what());
  }
  auto form = [&](const char* key, int n) {
    EigenForm f;
    f.dim = n;
    if (!j.contains(key) || !j[key].contains("pairs"))
      throw ValidationError(std::string("instance JSON: missing ") + key +
                            ".pairs");
    for (const auto& p : j[key]["pairs"]) {
      EigenPair ep;
      ep.eigenvalue = p.at("eigenvalue").get<double>();
      ep.vector = p.at("vector").get<std::vector<double>>();
      f.pairs.push_back(std::move(ep));
    }
    return f;
  };
  ProblemInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.alpha = j.at("alpha").get<double>();
    inst.beta = j.at("beta").get<double>();
    inst.A = form("A", inst.n);
    inst.B = form("B", inst.n);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance JSON: ") + e.what());
  }
  return inst;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + path);
  os << content;
  if (!os) throw ValidationError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_instance(const ProblemInstance& inst, const std::string& path) {
  write_file(path, instance_to_json(inst));
}

ProblemInstance read_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

std::string result_to_json(const SolveResult& result) {
  json j{{"delta_star", result.delta_star},
         {"x_star", json::array()},
         {"iterations", result.iterations},
         {"subproblem_calls", result.subproblem_calls},
         {"lookahead_accepts", result.lookahead_accepts},
         {"engine", engine_name(result.engine_used)},
         {"gamma_shift", result.gamma_shift}};
  for (auto s : result.x_star) j["x_star"].push_back(static_cast<int>(s));
  return j.dump() + "\n";
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::ostringstream os;
  os << "iter,delta,f,g,branch,engine,divergence\n";
  for (const TraceRow& r : trace.rows) {
    os << r.iter << "," << fmt_double(r.delta) << "," << fmt_double(r.f) << ","
       << fmt_double(r.g) << "," << branch_name(r.branch) << ","
       << engine_name(r.engine) << ","
       << (r.divergence ? fmt_double(*r.divergence) : "") << "\n";
  }
  return os.str();
}

SolveTrace trace_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line))
    throw ValidationError("trace CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "iter,delta,f,g,branch,engine,divergence")
    throw ValidationError("trace CSV: unexpected header '" + line + "'");
  SolveTrace trace;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 7)
      throw ValidationError("trace CSV line " + std::to_string(lineno) +
                            ": expected 7 columns");
    TraceRow r;
    try {
      r.iter = std::stoi(cells[0]);
      r.delta = std::stod(cells[1]);
      r.f = std::stod(cells[2]);
      r.g = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw ValidationError("trace CSV line " + std::to_string(lineno) +
                            ": bad number");
    }
    auto br = branch_from_name(cells[4]);
    if (!br)
      throw ValidationError("trace CSV line " + std::to_string(lineno) +
                            ": unknown branch '" + cells[4] + "'");
    r.branch = *br;
    auto eng = engine_from_name(cells[5]);
    if (!eng)
      throw ValidationError("trace CSV line " + std::to_string(lineno) +
                            ": unknown engine '" + cells[5] + "'");
    r.engine = *eng;
    if (!cells[6].empty()) {
      try {
        r.divergence = std::stod(cells[6]);
      } catch (const std::exception&) {
        throw ValidationError("trace CSV line " + std::to_string(lineno) +
                              ": bad divergence");
      }
    }
    if (r.branch == TraceBranch::Lookahead) trace.lookahead = true;
    trace.rows.push_back(std::move(r));
  }
  if (trace.rows.empty()) throw ValidationError("trace CSV: no rows");
  return trace;
}

void write_trace(const SolveTrace& trace, const std::string& path) {
  write_file(path, trace_to_csv(trace));
}

SolveTrace read_trace(const std::string& path) {
  return trace_from_csv(read_file(path));
}

std::string lemma_report_to_json(const LemmaReport& report) {
  json j{{"lemma1", report.lemma1},
         {"lemma3", report.lemma3},
         {"lemma4", report.lemma4 ? json(*report.lemma4) : json(nullptr)},
         {"violations", json::array()}};
  for (const auto& v : report.violations)
    j["violations"].push_back(json{{"iter", v.iter}, {"detail", v.what}});
  return j.dump() + "\n";
}

std::string lemma_report_to_text(const LemmaReport& report) {
  std::ostringstream os;
  os << "lemma1 (monotone iterates, ratio inequality): "
     << (report.lemma1 ? "ok" : "VIOLATED") << "\n";
  os << "lemma3 (divergence nonincreasing):            "
     << (report.lemma3 ? "ok" : "VIOLATED") << "\n";
  os << "lemma4 (look-ahead halving):                  "
     << (report.lemma4 ? (*report.lemma4 ? "ok" : "VIOLATED")
                       : "not applicable")
     << "\n";
  for (const auto& v : report.violations)
    os << "  iter " << v.iter << ": " << v.what << "\n";
  return os.str();
}

}  // namespace fracqp::io
