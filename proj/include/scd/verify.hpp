//! \file verify.hpp
//! \brief End-to-end acceptance checks, grouped into named suites.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scd/io.hpp"

namespace scd
{
struct CriterionResult
{
    int id{0};
    std::string name;
    bool pass{false};
    double seconds{0};
    json metrics = json::object();
};

struct SuiteReport
{
    std::string suite;
    std::vector<CriterionResult> results;

    bool pass() const;
    json to_json() const;
};

//! Criteria 1..10.
inline constexpr int criterion_count = 10;

CriterionResult run_criterion(int id, std::uint64_t seed = 1);

std::vector<std::string> const& suite_names();

//! Throws std::invalid_argument listing the valid names for an unknown suite.
SuiteReport run_suite(std::string const& name, std::uint64_t seed = 1);

//! One line: "criterion <id> <name>: PASS|FAIL <metrics>".
std::string summary_line(CriterionResult const& r);

//---------------------------------------------------------------------------//
// Configurations used by the checks
//---------------------------------------------------------------------------//
TilingConfig bcc_config();
//! a_len = 1, arccos(3/5), c3 = 1, zero shifts.
TilingConfig axis_config();
//! Quarter turn, c3 = 1, lambda = 0.3, slides (1/4, 0) repeating.
TilingConfig periodic_config();

//! Minimal coincidence solution by exhaustive search over |kappa, lambda, mu, nu| <= bound.
std::optional<CoincidenceSolution> coincidence_brute_force(Rational const& b1, int bound);

}  // namespace scd
