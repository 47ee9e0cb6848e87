#pragma once

// Scenario files: declarations of fields, algebras, involutions and
// constructions followed by `run` directives, validated in full (syntax,
// references, construction side conditions) before any check executes.
//
//   # comment
//   F = Q
//   D = matrix3(F)
//   J = first_tits(D, lambda=2)
//   g = diag(1,2,3)
//   run axioms(J, samples=20, seed=1)
//   run certify(aut_ext_D(J, g=g, h=diag(6,1,1)), expect=automorphism)
//
// A statement continues onto following lines while parentheses are open.
// The grammar of every form is listed in README.md.

#include <albert/rpaths.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace albert {

enum class Command { CheckAxioms, VerifyMap, BuildCert, CheckCert };
std::string_view command_name(Command c);

struct RunOptions {
  std::optional<std::uint64_t> seed;     // overrides directive seeds
  std::optional<std::size_t> samples;    // overrides directive sample counts
  bool parallel = false;                 // run directives concurrently
};

struct ReportEntry {
  std::size_t line = 0;
  std::string directive;  // directive source text
  CheckResult check;
};

struct Report {
  Command command = Command::CheckAxioms;
  std::string source;
  std::optional<std::uint64_t> seed;
  std::vector<ReportEntry> entries;
  std::vector<RCertificate> certificates;  // build-cert only

  bool pass() const;
  std::string to_text() const;
  // Deterministic JSON: no timings, stable key order.
  std::string to_machine() const;
};

class Scenario {
 public:
  // Throws ParseError (with line and column), UnresolvedReference, or the
  // domain error of a construction whose side conditions fail.
  static Scenario parse(std::string_view text, std::string source = "<input>");
  static Scenario load(const std::filesystem::path& path);  // IoError

  // Runs the directives that belong to `command`; throws InvalidArgument when
  // there are none and the validation error of a sampled directive that
  // lacks a seed.
  Report run(Command command, const RunOptions& options = {}) const;

  std::size_t directive_count() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

// A construction descriptor such as "first_tits(matrix3(Q), lambda=2)", as
// written into certificate files.
JordanPtr parse_construction(std::string_view text);

// Process exit status for an error class: 2 parse, 3 unresolved reference,
// 5 I/O, 4 any other domain or validation error.
int exit_status(Errc code);

}  // namespace albert
