// Copyright 2026 The tempcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempcompat.hpp"
#include "tempcompat/io.hpp"

namespace tempcompat::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool json = false;
  bool text = false;
  std::string input;
  std::string out;
  std::string dir;
  std::string side = "A";
  int m = 1;
  std::string stage = "output";
  long long samples = 200;
  std::string format = "csv";
};

Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.verdict = o.tol;
  t.psd = o.tol;
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::FormatError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes to --out when given, else to the command's stdout.
void emit(const Options& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw io::FormatError("cannot write " + o.out);
  f << content;
}

Side parse_side(const std::string& s) {
  if (s == "A" || s == "a") return Side::A;
  if (s == "B" || s == "b") return Side::B;
  throw io::FormatError("--side must be A or B");
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::string text_report(const Certificate& c) {
  std::ostringstream s;
  for (const CompatibilityReport* r : {&c.a, &c.b}) {
    s << "side " << to_string(r->side) << ": " << (r->compatible ? "compatible" : "incompatible")
      << (r->boundary ? " (boundary)" : "") << "; test lambda_min " << fmt(r->test_min_eigenvalue)
      << ", choi lambda_min " << fmt(r->cptp.choi_min_eigenvalue) << ", reconstruction residual "
      << fmt(r->reconstruction_residual) << (r->faithful_marginal ? "" : ", non-faithful marginal")
      << "\n";
  }
  s << "ppt: " << (c.ppt ? "yes" : "no") << " (lambda_min " << fmt(c.ppt_min_eigenvalue) << ")\n";
  s << "verdict: " << (c.compatible_both() ? "compatible in both directions" : "incompatible")
    << "\n";
  return s.str();
}

int certify_one(const Options& o, const std::string& path, std::string& rendered) {
  const Tolerances tol = tolerances(o);
  const BipartiteOperator tau = io::bipartite_from_document(io::parse(read_file(path)), tol);
  const Certificate c = certify(tau, tol);
  rendered = o.text && !o.json ? text_report(c) : io::dump(io::report_document(c, o.tol));
  return c.compatible_both() ? kOk : kIncompatible;
}

int cmd_certify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.dir.empty()) {
    if (o.input.empty()) throw io::FormatError("certify: an input file or --dir is required");
    std::string rendered;
    const int code = certify_one(o, o.input, rendered);
    emit(o, rendered, out);
    return code;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  int worst = kOk;
  std::ostringstream summary;
  for (const fs::path& f : files) {
    int code = kOk;
    std::string verdict;
    try {
      std::string rendered;
      code = certify_one(o, f.string(), rendered);
      verdict = code == kOk ? "compatible" : "incompatible";
    } catch (const InconsistencyError& e) {
      code = kInternalError;
      verdict = std::string("internal error: ") + e.what();
    } catch (const std::exception& e) {
      code = kInputError;
      verdict = std::string("input error: ") + e.what();
    }
    summary << f.filename().string() << "\t" << code << "\t" << verdict << "\n";
    // Severity order: internal > input error > incompatible > ok.
    const auto rank = [](int c) { return c == kInternalError ? 3 : c == kInputError ? 2 : c == kIncompatible ? 1 : 0; };
    if (rank(code) > rank(worst)) worst = code;
  }
  emit(o, summary.str(), out);
  (void)err;
  return worst;
}

int cmd_channel(const Options& o, std::ostream& out) {
  const Tolerances tol = tolerances(o);
  const BipartiteOperator tau = io::bipartite_from_document(io::parse(read_file(o.input)), tol);
  const Side side = parse_side(o.side);
  const Marginals m = validate_marginals(tau, tol);
  const SuperOp e = temporal_channel(tau, side, tol);
  emit(o, io::dump(io::channel_document(e, m.on(side).matrix(), is_cptp(e, tol.verdict))), out);
  return kOk;
}

int cmd_pdm(const Options& o, std::ostream& out) {
  const io::Document d = io::parse(read_file(o.input));
  if (d.kind != io::Kind::correlations) throw io::FormatError("pdm: expected a correlations document");
  emit(o, io::dump(io::state_document(pdm_from_correlations(io::correlations_from_payload(d.payload)))), out);
  return kOk;
}

int cmd_expect(const Options& o, std::ostream& out) {
  const Tolerances tol = tolerances(o);
  const io::Document d = io::parse(read_file(o.input));
  if (d.kind != io::Kind::channel) throw io::FormatError("expect: expected a channel document");
  const io::ChannelPayload p = io::channel_from_payload(d.payload);
  if (!p.input_state) throw io::FormatError("expect: channel document has no input_state");
  const Process process(p.channel, DensityMatrix(*p.input_state, tol));
  emit(o, io::dump(io::correlations_document(correlations_from_process(process, o.m))), out);
  return kOk;
}

ComplexMatrix bloch_state(const std::array<double, 3>& r) {
  const Complex i(0.0, 1.0);
  ComplexMatrix rho(2, 2);
  rho << 1.0 + r[2], r[0] - i * r[1], r[0] + i * r[1], 1.0 - r[2];
  return 0.5 * rho;
}

std::array<double, 3> bloch_vector(const ComplexMatrix& rho) {
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

int cmd_bloch(const Options& o, std::ostream& out) {
  const Tolerances tol = tolerances(o);
  const BipartiteOperator tau = io::bipartite_from_document(io::parse(read_file(o.input)), tol);
  const Side side = parse_side(o.side);
  if (tau.dim_a() != 2 || tau.dim_b() != 2) throw DimensionError("bloch: both factors must be qubits");
  if (o.samples < 0) throw io::FormatError("bloch: --samples must be nonnegative");
  if (o.stage != "input" && o.stage != "dephased" && o.stage != "output") {
    throw io::FormatError("bloch: --stage must be input, dephased or output");
  }
  const Marginals m = validate_marginals(tau, tol);
  const SuperOp d = dephasing_channel(m.on(side), KernelOutput::maximally_mixed, tol);
  const SuperOp e = temporal_channel(tau, side, tol);

  Rng rng(o.seed);
  std::vector<std::array<double, 3>> points;
  for (long long k = 0; k < o.samples; ++k) {
    std::array<double, 3> r{rng.normal(), rng.normal(), rng.normal()};
    const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    for (double& x : r) x /= n;
    const ComplexMatrix rho = bloch_state(r);
    if (o.stage == "input") {
      points.push_back(r);
    } else if (o.stage == "dephased") {
      points.push_back(bloch_vector(d(rho)));
    } else {
      points.push_back(bloch_vector(e(rho)));
    }
  }

  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (o.format == "json") {
    io::Json arr = io::Json::array();
    for (const auto& p : points) arr.push_back(io::Json::array({p[0], p[1], p[2]}));
    s << io::Json{{"stage", o.stage}, {"side", o.side}, {"points", arr}}.dump() << "\n";
  } else if (o.format == "csv") {
    if (!points.empty()) s << "x,y,z\n";
    for (const auto& p : points) s << p[0] << "," << p[1] << "," << p[2] << "\n";
  } else {
    throw io::FormatError("bloch: --format must be csv or json");
  }
  emit(o, s.str(), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Temporal compatibility certification for bipartite quantum states", "tempcompat"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "positivity tolerance")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_flag("--json", o.json, "JSON reports (default)");
  app.add_flag("--text", o.text, "human-readable reports");

  auto* certify_cmd = app.add_subcommand("certify", "certify temporal compatibility in both directions");
  certify_cmd->add_option("input", o.input, "state or ensemble document");
  certify_cmd->add_option("--dir", o.dir, "certify every .json file in a directory");
  certify_cmd->add_option("--out", o.out, "output file");

  auto* channel_cmd = app.add_subcommand("channel", "temporal channel of a state");
  channel_cmd->add_option("input", o.input, "state or ensemble document")->required();
  channel_cmd->add_option("--side", o.side, "input side A or B")->capture_default_str();
  channel_cmd->add_option("--out", o.out, "output file");

  auto* pdm_cmd = app.add_subcommand("pdm", "pseudo-density matrix of a correlation table");
  pdm_cmd->add_option("input", o.input, "correlations document")->required();
  pdm_cmd->add_option("--out", o.out, "output file");

  auto* expect_cmd = app.add_subcommand("expect", "Pauli two-time expectation values of a process");
  expect_cmd->add_option("input", o.input, "channel document with input_state")->required();
  expect_cmd->add_option("--m", o.m, "qubits per side")->capture_default_str();
  expect_cmd->add_option("--out", o.out, "output file");

  auto* bloch_cmd = app.add_subcommand("bloch", "Bloch point cloud of sampled pure inputs");
  bloch_cmd->add_option("input", o.input, "qubit state or ensemble document")->required();
  bloch_cmd->add_option("--stage", o.stage, "input, dephased or output")->capture_default_str();
  bloch_cmd->add_option("--samples", o.samples, "number of sampled points")->capture_default_str();
  bloch_cmd->add_option("--side", o.side, "input side A or B")->capture_default_str();
  bloch_cmd->add_option("--format", o.format, "csv or json")->capture_default_str();
  bloch_cmd->add_option("--out", o.out, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*certify_cmd) return cmd_certify(o, out, err);
    if (*channel_cmd) return cmd_channel(o, out);
    if (*pdm_cmd) return cmd_pdm(o, out);
    if (*expect_cmd) return cmd_expect(o, out);
    if (*bloch_cmd) return cmd_bloch(o, out);
  } catch (const InconsistencyError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace tempcompat::cli
