#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/udouble.hpp"

// Named verification suites binding the algebra modules together and
// emitting structured, deterministic reports.

namespace iqv {

// Which checks to run and how. Negative range fields select the per-node
// defaults documented with each suite.
struct SuiteSpec {
  // One of: presentation, involutions, bkl, recursion, serre_lusztig,
  // rank1, higher_serre, braid_conjecture, scalars, all.
  std::string suite = "all";
  CartanDatum datum;
  long max_m = -1;    // family-size cap; -1 selects the per-node default
  long max_n = 2;     // three-node family: n ranges over [1, max_n]
  long max_nm = 3;    // commutation identity: N, M range over [0, max_nm]
  int e_set = 0;      // 0 = both signs; +1 or -1 restricts to one of them
  bool fast = false;  // modular prepass before the exact confirmation
  std::uint64_t seed = 0;
};

// One executed check. Every parameter that does not apply holds "-" so all
// records share one field layout.
struct CheckRecord {
  std::string suite;
  std::string case_label;
  std::string datum;
  std::string i = "-";
  std::string j = "-";
  std::string m = "-";
  std::string n = "-";
  std::string e = "-";
  std::string parity = "-";
  std::string variant = "-";
  std::string status;    // pass | fail | nonzero-as-expected | finding
  std::string expected;  // pass | nonzero | finding
  std::string method;    // exact | fast
  std::string note = "-";
  std::string witness = "-";  // canonical reduced element, spaces stripped
  long elapsed_ms = 0;
};

// Space-separated key=value rendering with the stable field order:
// suite case datum i j m n e parity variant status expected method note
// witness elapsed_ms.
std::string record_line(const CheckRecord& r);

// Natural-order comparison for case labels: digit runs compare by numeric
// value, everything else byte-wise; the full byte string breaks ties.
bool natural_less(const std::string& a, const std::string& b);

struct VerificationReport {
  std::vector<CheckRecord> records;  // sorted by case label (natural order)

  // True when no check ended in status "fail". Checks expected to be
  // findings never produce "fail", so they never affect this.
  bool all_theorems_pass() const;

  std::string to_records() const;  // one record_line per check
  std::string to_table() const;    // human-readable summary
};

// The nine concrete suite names followed by "all".
const std::vector<std::string>& suite_names();

// Runs the named suite over the spec's datum and ranges. The engine must
// have been built for the same datum. Throws std::invalid_argument for an
// unknown suite name; a per-check degree-budget overflow is reported in
// that check's record and the suite continues.
VerificationReport run_suite(UEngine& engine, const SuiteSpec& spec);

// Convenience overload constructing a fresh engine for spec.datum.
VerificationReport run_suite(const SuiteSpec& spec,
                             const UEngineOptions& options = {});

}  // namespace iqv
