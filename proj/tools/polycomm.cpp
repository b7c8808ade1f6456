#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "polycomm/json_io.hpp"

namespace {

using namespace polycomm;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitCertificate = 4;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open output file: " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

QVector parse_vector_arg(const std::string& arg) {
  std::vector<Rational> entries;
  std::string token;
  std::istringstream in(arg);
  while (std::getline(in, token, ',')) entries.push_back(parse_rational(token));
  if (entries.empty()) throw ParseError("empty vector argument");
  return QVector(std::move(entries));
}

std::string decimal_string(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r.convert_to<double>());
  return buf;
}

struct Options {
  std::string output;
  std::string format = "json";
  long max_len = 20;
};

int cmd_classify(const std::string& input, const std::string& lattice_file, const Options& opt) {
  const json j = read_json_file(input);
  if (!j.is_object() || !j.contains("A")) throw ParseError("classify input needs an \"A\" matrix");
  QMatrix a = qmatrix_from_json(j.at("A"));
  std::optional<Lattice> l;
  if (j.contains("L")) l = lattice_from_json(j.at("L"));
  if (!lattice_file.empty()) l = lattice_from_json(read_json_file(lattice_file));
  const LMGroup g = make_lm_group(std::move(a), std::move(l));
  write_output(opt.output, classification_to_json(classify(g)).dump(2));
  return kExitOk;
}

int cmd_build_polyfun(const std::string& input, const Options& opt) {
  const StarredLanguage lang = language_from_json(read_json_file(input));
  BuildResult built = build_polyfun(lang);
  json out{{"polyfun", polyfun_to_json(built.fun)},
           {"certificate", xi_certificate_to_json(built.certificate)},
           {"validation", validation_report_to_json(*built.fun.report())},
           {"valid", built.fun.validity() == Validity::Valid}};
  write_output(opt.output, out.dump(2));
  return kExitOk;
}

int cmd_verify(const std::string& input, const Options& opt) {
  const StarredLanguage lang = language_from_json(read_json_file(input));
  BuildResult built = build_polyfun(lang);
  const auto bound = verify_length_bound(lang, built.fun, built.certificate.xi, opt.max_len);
  const auto fibers = finite_to_one_check(lang, opt.max_len);
  const auto traveller = fellow_traveller_check(lang, std::max(1L, opt.max_len));
  json out{{"max_len", opt.max_len},
           {"xi", rational_to_json(built.certificate.xi)},
           {"lambda_observed", traveller.lambda_observed},
           {"kappa_observed", traveller.kappa_observed},
           {"worst_slack", rational_to_json(bound.worst_slack)},
           {"length_bound", length_bound_report_to_json(lang, bound)},
           {"finite_to_one", finite_to_one_report_to_json(lang, fibers)},
           {"fellow_traveller", fellow_traveller_report_to_json(traveller)},
           {"certificate", xi_certificate_to_json(built.certificate)},
           {"validation", validation_report_to_json(*built.fun.report())}};
  write_output(opt.output, out.dump(2));
  if (!bound.ok) {
    std::cerr << "length bound violated by word "
              << json(word_names(lang.alphabet, bound.violation->word)).dump() << " (branch "
              << bound.violation->branch + 1 << ")\n";
    return kExitViolation;
  }
  return kExitOk;
}

PolyFun load_polyfun(const std::string& path) {
  PolyFun f = polyfun_from_json(read_json_file(path));
  validate(f);
  return f;
}

int cmd_eval(const std::string& fun_file, const std::string& vec_arg, const Options& opt) {
  const PolyFun f = load_polyfun(fun_file);
  write_output(opt.output, to_string(eval(f, parse_vector_arg(vec_arg))));
  return kExitOk;
}

int cmd_restrict(const std::string& fun_file, const std::string& mat_file, const Options& opt) {
  const PolyFun f = load_polyfun(fun_file);
  if (f.validity() != Validity::Valid)
    throw SemanticError("restrict: input polyhedral function is invalid");
  const QMatrix b = qmatrix_from_json(read_json_file(mat_file));
  PolyFun g = restrict(f, b);
  json out{{"polyfun", polyfun_to_json(g)},
           {"validation", validation_report_to_json(*g.report())},
           {"valid", g.validity() == Validity::Valid}};
  write_output(opt.output, out.dump(2));
  return kExitOk;
}

int cmd_symmetries(const std::string& fun_file, const Options& opt) {
  const PolyFun f = load_polyfun(fun_file);
  const auto group = symmetry_group(f);
  json mats = json::array();
  for (const auto& m : group) mats.push_back(qmatrix_to_json(m));
  write_output(opt.output, json{{"order", group.size()}, {"matrices", std::move(mats)}}.dump(2));
  return kExitOk;
}

int cmd_comm_image(const std::string& fun_file, const std::string& mat_file, const Options& opt) {
  const PolyFun f = load_polyfun(fun_file);
  const QMatrix b = qmatrix_from_json(read_json_file(mat_file));
  const auto group = comm_image_bound(f, b);
  json mats = json::array();
  for (const auto& m : group) mats.push_back(qmatrix_to_json(m));
  write_output(opt.output, json{{"order", group.size()}, {"matrices", std::move(mats)}}.dump(2));
  return kExitOk;
}

int cmd_levelset(const std::string& fun_file, const std::string& level, const Options& opt) {
  const PolyFun f = load_polyfun(fun_file);
  const Rational c = parse_rational(level);
  const auto polygon = level_set_polyline(f, c);
  if (opt.format == "csv") {
    std::ostringstream os;
    os << "x,y,x_decimal,y_decimal\n";
    for (const auto& v : polygon)
      os << to_string(v[0]) << ',' << to_string(v[1]) << ',' << decimal_string(v[0]) << ','
         << decimal_string(v[1]) << '\n';
    write_output(opt.output, os.str());
  } else {
    json verts = json::array();
    for (const auto& v : polygon) verts.push_back(qvector_to_json(v));
    write_output(opt.output, json{{"level", rational_to_json(c)}, {"vertices", std::move(verts)}}.dump(2));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact polyhedral functions on Z^N and the G(A,L) classifier"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  app.add_option("--output", opt.output, "write output to a file instead of stdout");

  // POLYCOMM_THREADS caps worker parallelism; the current implementation is
  // sequential, so any cap is honoured trivially.
  if (const char* threads = std::getenv("POLYCOMM_THREADS")) (void)threads;

  std::string input, second, vec_arg, lattice_file, level;

  auto* classify_cmd = app.add_subcommand("classify", "classify a Leary-Minasyan group G(A,L)");
  classify_cmd->add_option("input", input, "JSON file with {\"A\": matrix, \"L\"?: lattice}")
      ->required();
  classify_cmd->add_option("--lattice", lattice_file, "JSON file with the lattice L");

  auto* build_cmd =
      app.add_subcommand("build-polyfun", "build the polyhedral function of a starred language");
  build_cmd->add_option("input", input, "language JSON file")->required();

  auto* verify_cmd =
      app.add_subcommand("verify", "check the length bound and structure certificates");
  verify_cmd->add_option("input", input, "language JSON file")->required();
  verify_cmd->add_option("--max-len", opt.max_len, "word length bound (default 20)");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a polyhedral function at a point");
  eval_cmd->add_option("fun", input, "polyhedral function JSON file")->required();
  eval_cmd->add_option("point", vec_arg, "comma-separated rational coordinates")->required();

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict along a basis matrix");
  restrict_cmd->add_option("fun", input, "polyhedral function JSON file")->required();
  restrict_cmd->add_option("matrix", second, "matrix JSON file (full column rank)")->required();

  auto* sym_cmd = app.add_subcommand("symmetries", "the finite invariance group of a function");
  sym_cmd->add_option("fun", input, "polyhedral function JSON file")->required();

  auto* comm_cmd =
      app.add_subcommand("comm-image", "bound the commensurator image on a sublattice");
  comm_cmd->add_option("fun", input, "polyhedral function JSON file")->required();
  comm_cmd->add_option("matrix", second, "integer basis matrix JSON file")->required();

  auto* level_cmd = app.add_subcommand("levelset", "level-set polygon of a planar function");
  level_cmd->add_option("fun", input, "polyhedral function JSON file")->required();
  level_cmd->add_option("level", level, "positive rational level")->required();
  level_cmd->add_option("--format", opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitParse : kExitOk;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(input, lattice_file, opt);
    if (build_cmd->parsed()) return cmd_build_polyfun(input, opt);
    if (verify_cmd->parsed()) return cmd_verify(input, opt);
    if (eval_cmd->parsed()) return cmd_eval(input, vec_arg, opt);
    if (restrict_cmd->parsed()) return cmd_restrict(input, second, opt);
    if (sym_cmd->parsed()) return cmd_symmetries(input, opt);
    if (comm_cmd->parsed()) return cmd_comm_image(input, second, opt);
    if (level_cmd->parsed()) return cmd_levelset(input, level, opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << '\n';
    return kExitCertificate;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSemantic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
  return kExitOk;
}
