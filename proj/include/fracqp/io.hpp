#ifndef FRACQP_IO_HPP
#define FRACQP_IO_HPP

#include <string>

#include "fracqp/analysis.hpp"
#include "fracqp/dinkelbach.hpp"
#include "fracqp/instance.hpp"

namespace fracqp::io {

// 17 significant digits: exact double round-trip in text form.
std::string fmt_double(double v);

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);
void write_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance read_instance(const std::string& path);

std::string result_to_json(const SolveResult& result);

// Trace CSV, exact header: iter,delta,f,g,branch,engine,divergence
std::string trace_to_csv(const SolveTrace& trace);
SolveTrace trace_from_csv(const std::string& text);
void write_trace(const SolveTrace& trace, const std::string& path);
SolveTrace read_trace(const std::string& path);

std::string lemma_report_to_json(const LemmaReport& report);
std::string lemma_report_to_text(const LemmaReport& report);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fracqp::io

#endif
