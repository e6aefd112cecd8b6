#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "axioquad/asymptotics.hpp"

namespace axioquad::cli {

enum class Subcommand { integrate, area, arclength, volume, order, verify };
enum class Format { table, json, csv };
enum class AxiomChoice { additivity, asymptotic, both };

inline constexpr const char* kVersion = "0.1.0";

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitReportFailed = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitNoConvergence = 3;

struct CommandRequest {
  Subcommand subcommand = Subcommand::integrate;
  std::string f;
  std::optional<std::string> df;
  std::optional<std::string> F;
  double a = 0.0;
  double b = 1.0;
  double eps = 1e-6;
  double tol = 1e-6;
  // verify: candidate built with this eps; tol/10 when absent
  std::optional<double> candidate_eps;
  std::optional<double> h0, ratio;
  std::optional<int> count;
  std::optional<Side> side;
  Format format = Format::table;
  std::optional<std::uint64_t> seed;  // AXIOQUAD_SEED, then 42, when absent
  AxiomChoice axiom = AxiomChoice::both;
  int trials = 200;
  std::optional<int> n;  // order: also decide g = o(h^n)
};

// Seed used when the request carries none.
[[nodiscard]] std::uint64_t default_seed();

// Runs the request, writing the document to `out` and at most one
// `error: ...` line to `err`.
int run(const CommandRequest& request, std::ostream& out, std::ostream& err);

[[nodiscard]] std::string_view subcommand_name(Subcommand s) noexcept;

}  // namespace axioquad::cli
