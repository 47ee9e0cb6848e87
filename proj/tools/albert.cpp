// albert: command-line front end for scenario checks and R-equivalence
// certificates.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 parse error,
// 3 unresolved reference, 4 validation or domain error, 5 I/O error,
// 64 usage error, 70 internal error.

#include <albert/scenario.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kCheckFailed = 1;
constexpr int kUsage = 64;
constexpr int kInternal = 70;

struct Flags {
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  bool parallel = false;
  std::string format = "text";
};

void emit(const albert::Report& report, const Flags& f) {
  std::cout << (f.format == "machine" ? report.to_machine() : report.to_text());
}

void write_certificates(const albert::Report& report, const std::string& path) {
  for (std::size_t i = 0; i < report.certificates.size(); ++i) {
    const std::string target = i == 0 ? path : path + "." + std::to_string(i + 1);
    std::ofstream out(target, std::ios::binary);
    if (!out) throw albert::Error(albert::Errc::IoError, "cannot write " + target);
    albert::write_certificate(out, report.certificates[i]);
    if (!out.flush()) throw albert::Error(albert::Errc::IoError, "cannot write " + target);
  }
}

albert::Report check_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw albert::Error(albert::Errc::IoError, "cannot read " + path);
  const albert::RCertificate cert = albert::read_certificate(in);
  const albert::JordanPtr j = albert::parse_construction(cert.construction);
  albert::Report report;
  report.command = albert::Command::CheckCert;
  report.source = path;
  for (auto& c : albert::cert_check(cert, j).checks) report.entries.push_back({0, "certificate", std::move(c)});
  return report;
}

int run(albert::Command command, const Flags& f) {
  albert::Report report;
  if (command == albert::Command::CheckCert) {
    report = check_certificate(f.input);
  } else {
    albert::RunOptions opt;
    opt.seed = f.seed;
    opt.samples = f.samples;
    opt.parallel = f.parallel;
    report = albert::Scenario::load(f.input).run(command, opt);
    if (command == albert::Command::BuildCert && report.pass()) write_certificates(report, f.output);
  }
  emit(report, f);
  return report.pass() ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic norm structures, Tits constructions and R-equivalence certificates"};
  app.require_subcommand(1);
  Flags f;

  const auto add = [&](const char* name, const char* help, const char* input_help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", f.input, input_help)->required();
    sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
    return sub;
  };
  const auto sampling = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Seed for every sampled check (overrides directive seeds)");
    sub->add_option("--samples", f.samples, "Sample count for every sampled check");
    sub->add_flag("--parallel", f.parallel, "Run independent checks concurrently");
  };

  CLI::App* axioms = add("check-axioms", "Run the axiom and identity directives of a scenario", "Scenario file");
  sampling(axioms);
  CLI::App* verify = add("verify-map", "Certify the maps and paths of a scenario", "Scenario file");
  sampling(verify);
  CLI::App* build = add("build-cert", "Build, self-check and write R-equivalence certificates", "Scenario file");
  sampling(build);
  build->add_option("-o,--output", f.output, "Certificate path (further certificates get .2, .3, ...)")->required();
  CLI::App* check = add("check-cert", "Check a certificate file using only its contents", "Certificate file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  albert::Command command = albert::Command::CheckAxioms;
  if (verify->parsed()) command = albert::Command::VerifyMap;
  if (build->parsed()) command = albert::Command::BuildCert;
  if (check->parsed()) command = albert::Command::CheckCert;

  try {
    return run(command, f);
  } catch (const albert::Error& e) {
    std::cerr << "albert: " << e.what() << "\n";
    return albert::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "albert: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
