#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "iqv/presets.hpp"
#include "iqv/udouble.hpp"
#include "iqv/verify.hpp"

using namespace iqv;

namespace {

const CartanDatum& preset(const std::string& name) {
  const CartanDatum* d = find_preset(name);
  REQUIRE(d != nullptr);
  return *d;
}

SuiteSpec spec_for(const std::string& suite, const std::string& datum) {
  SuiteSpec s;
  s.suite = suite;
  s.datum = preset(datum);
  return s;
}

std::string strip_elapsed(std::string s) {
  return std::regex_replace(s, std::regex("elapsed_ms=[0-9]+"),
                            "elapsed_ms=X");
}

std::map<std::string, std::string> status_by_case(
    const VerificationReport& rep) {
  std::map<std::string, std::string> m;
  for (const CheckRecord& r : rep.records) m[r.case_label] = r.status;
  return m;
}

}  // namespace

TEST_CASE("record lines have the stable field order") {
  CheckRecord r;
  r.suite = "bkl";
  r.case_label = "bkl.i1";
  r.datum = "a2-swap";
  r.i = "1";
  r.status = "pass";
  r.expected = "pass";
  r.method = "exact";
  r.elapsed_ms = 7;
  CHECK(record_line(r) ==
        "suite=bkl case=bkl.i1 datum=a2-swap i=1 j=- m=- n=- e=- parity=- "
        "variant=- status=pass expected=pass method=exact note=- witness=- "
        "elapsed_ms=7");
}

TEST_CASE("natural ordering of case labels") {
  CHECK(natural_less("case.m2", "case.m10"));
  CHECK_FALSE(natural_less("case.m10", "case.m2"));
  CHECK(natural_less("case.m2.e+1", "case.m2.e-1"));  // '+' sorts before '-'
  CHECK(natural_less("a.9", "a.10"));
  CHECK(natural_less("abc", "abd"));
  CHECK(natural_less("abc", "abc.x"));
  CHECK_FALSE(natural_less("abc", "abc"));
  CHECK(natural_less("RR1.i1.m4", "RR2.i1.m1"));
}

TEST_CASE("suite catalog and spec validation") {
  const std::vector<std::string>& names = suite_names();
  REQUIRE(names.size() == 10);
  CHECK(names.back() == "all");

  SuiteSpec s = spec_for("no-such-suite", "a2-swap");
  CHECK_THROWS_WITH_AS(run_suite(s), doctest::Contains("unknown suite"),
                       std::invalid_argument);

  s = spec_for("bkl", "a2-swap");
  s.e_set = 3;
  CHECK_THROWS_AS(run_suite(s), std::invalid_argument);
  s.e_set = 0;
  s.max_n = 0;
  CHECK_THROWS_AS(run_suite(s), std::invalid_argument);
  s.max_n = 2;
  s.max_nm = -1;
  CHECK_THROWS_AS(run_suite(s), std::invalid_argument);

  // The engine-reuse overload insists on a matching datum.
  UEngine eng(preset("a1xa1-swap"));
  SuiteSpec other = spec_for("bkl", "a2-swap");
  CHECK_THROWS_AS(run_suite(eng, other), std::invalid_argument);
}

TEST_CASE("bkl suite emits one passing check per moved orbit") {
  for (const char* name : {"a2-swap", "a1xa1-swap", "a1aff-swap"}) {
    const VerificationReport rep = run_suite(spec_for("bkl", name));
    REQUIRE(rep.records.size() == 1);
    const CheckRecord& r = rep.records.front();
    CHECK(r.case_label == "bkl.i1");
    CHECK(r.status == "pass");
    CHECK(r.expected == "pass");
    CHECK(r.method == "exact");
    CHECK(r.witness == "-");
    CHECK(rep.all_theorems_pass());
  }
}

TEST_CASE("recursion suite is honest about the threshold") {
  // c = 0: the recursion holds from m = 1 on.
  {
    const VerificationReport rep = run_suite(spec_for("recursion",
                                                      "a1xa1-swap"));
    CHECK(rep.records.size() == 12);  // m in [1,3], both e, RR1 and RR2
    for (const CheckRecord& r : rep.records) {
      CHECK(r.status == "pass");
      CHECK(r.expected == "pass");
    }
    CHECK(rep.all_theorems_pass());
  }
  // c = -1: the m = 1 checks fail with a nonzero witness; m >= 2 pass.
  {
    const VerificationReport rep = run_suite(spec_for("recursion", "a2-swap"));
    CHECK(rep.records.size() == 16);  // m in [1,4], both e, RR1 and RR2
    int fails = 0;
    for (const CheckRecord& r : rep.records) {
      CHECK(r.expected == "pass");
      if (r.m == "1") {
        CHECK(r.status == "fail");
        CHECK(r.witness != "-");
        CHECK(r.witness.find(' ') == std::string::npos);
        ++fails;
      } else {
        CHECK(r.status == "pass");
        CHECK(r.witness == "-");
      }
    }
    CHECK(fails == 4);
    CHECK_FALSE(rep.all_theorems_pass());
  }
  // Restricting the sign set halves the record count.
  {
    SuiteSpec s = spec_for("recursion", "a2-swap");
    s.e_set = +1;
    const VerificationReport rep = run_suite(s);
    CHECK(rep.records.size() == 8);
    for (const CheckRecord& r : rep.records) CHECK(r.e == "+1");
  }
}

TEST_CASE("serre_lusztig suite thresholds and negative controls") {
  const VerificationReport rep =
      run_suite(spec_for("serre_lusztig", "a2-swap"));
  // c = -1: vanish checks m in [1,5] for y and yprime, reduced m in [3,5],
  // each for both signs.
  CHECK(rep.records.size() == 26);
  int controls = 0;
  int reduced = 0;
  for (const CheckRecord& r : rep.records) {
    if (r.variant == "reduced") {
      CHECK(r.status == "pass");
      ++reduced;
    } else if (r.m == "1") {
      CHECK(r.expected == "nonzero");
      CHECK(r.status == "nonzero-as-expected");
      CHECK(r.witness != "-");
      ++controls;
    } else {
      CHECK(r.expected == "pass");
      CHECK(r.status == "pass");
    }
  }
  CHECK(controls == 4);  // y and yprime, both signs
  CHECK(reduced == 6);
  CHECK(rep.all_theorems_pass());
}

TEST_CASE("rank1 suite runs only on commuting orbits") {
  SuiteSpec s = spec_for("rank1", "a1xa1-swap");
  s.max_nm = 2;
  const VerificationReport rep = run_suite(s);
  CHECK(rep.records.size() == 18);  // 3 x 3 pairs, both forms
  for (const CheckRecord& r : rep.records) CHECK(r.status == "pass");
  CHECK(rep.all_theorems_pass());

  const VerificationReport none = run_suite(spec_for("rank1", "a2-swap"));
  CHECK(none.records.empty());
  CHECK(none.all_theorems_pass());
}

TEST_CASE("higher_serre suite separates theorem range from findings") {
  const VerificationReport rep =
      run_suite(spec_for("higher_serre", "a3-tau13"));
  CHECK(rep.records.size() == 32);
  int n1_pass = 0;
  int n1_controls = 0;
  int n2_findings = 0;
  for (const CheckRecord& r : rep.records) {
    if (r.n == "1") {
      if (r.m == "1") {
        CHECK(r.status == "nonzero-as-expected");
        ++n1_controls;
      } else {
        CHECK(r.status == "pass");
        ++n1_pass;
      }
    } else {
      CHECK(r.n == "2");
      CHECK(r.expected == "finding");
      CHECK(r.status == "finding");
      const bool zero = r.note == "zero";
      const bool nonzero = r.note == "nonzero";
      CHECK((zero || nonzero));
      if (nonzero) CHECK(r.witness != "-");
      ++n2_findings;
    }
  }
  CHECK(n1_controls == 4);
  CHECK(n1_pass == 12);
  CHECK(n2_findings == 16);
  CHECK(rep.all_theorems_pass());

  const VerificationReport none =
      run_suite(spec_for("higher_serre", "a2-swap"));
  CHECK(none.records.empty());
}

TEST_CASE("braid suite composition on the rank-one preset") {
  const VerificationReport rep =
      run_suite(spec_for("braid_conjecture", "a1xa1-swap"));
  // 7 relations x 4 operators as findings, plus per-operator inverse-pair
  // and weight checks, plus 3 conjugation identities per sign.
  CHECK(rep.records.size() == 42);
  int structural = 0;
  int findings = 0;
  for (const CheckRecord& r : rep.records) {
    if (r.expected == "pass") {
      CHECK(r.status == "pass");
      const bool kinv = r.case_label.rfind("braid.kinv.", 0) == 0;
      const bool weight = r.case_label.rfind("braid.weight.", 0) == 0;
      CHECK((kinv || weight));
      ++structural;
    } else {
      CHECK(r.expected == "finding");
      CHECK(r.status == "finding");
      CHECK(r.note == "zero");  // the conjecture holds on this preset
      ++findings;
    }
  }
  CHECK(structural == 8);
  CHECK(findings == 34);
  CHECK(rep.all_theorems_pass());

  // No qualifying node: the suite is empty rather than an error.
  const VerificationReport none =
      run_suite(spec_for("braid_conjecture", "a2-swap"));
  CHECK(none.records.empty());
}

TEST_CASE("reports are deterministic, sorted, and engine-reuse agrees") {
  SuiteSpec s = spec_for("all", "a1xa1-swap");
  s.seed = 42;
  const VerificationReport rep1 = run_suite(s);
  const VerificationReport rep2 = run_suite(s);
  CHECK(strip_elapsed(rep1.to_records()) == strip_elapsed(rep2.to_records()));

  for (std::size_t t = 1; t < rep1.records.size(); ++t) {
    CHECK_FALSE(natural_less(rep1.records[t].case_label,
                             rep1.records[t - 1].case_label));
  }

  UEngine eng(preset("a1xa1-swap"));
  const VerificationReport rep3 = run_suite(eng, s);
  CHECK(strip_elapsed(rep3.to_records()) == strip_elapsed(rep1.to_records()));

  // The summary table mentions every suite that ran.
  const std::string table = rep1.to_table();
  for (const char* name :
       {"scalars", "presentation", "involutions", "bkl", "recursion",
        "serre_lusztig", "rank1", "braid_conjecture", "total"}) {
    CHECK(table.find(name) != std::string::npos);
  }
  CHECK(table.find("all theorem-class checks pass") != std::string::npos);
}

TEST_CASE("modular prepass agrees with the exact method") {
  for (const char* suite : {"presentation", "recursion", "serre_lusztig"}) {
    SuiteSpec exact = spec_for(suite, "a2-swap");
    SuiteSpec fast = exact;
    fast.fast = true;
    fast.seed = 7;
    const VerificationReport re = run_suite(exact);
    const VerificationReport rf = run_suite(fast);
    CHECK(status_by_case(re) == status_by_case(rf));
    for (const CheckRecord& r : rf.records) {
      CHECK(r.method == "fast");
      CHECK(r.note.find("modular-prepass-disagreed") == std::string::npos);
    }
  }
}

TEST_CASE("budget overflow is reported per case and the suite continues") {
  SuiteSpec s = spec_for("recursion", "a2-swap");
  s.max_m = 3;
  UEngineOptions opts;
  opts.degree_budget = 2;
  const VerificationReport rep = run_suite(s, opts);
  CHECK(rep.records.size() == 12);
  int overflowed = 0;
  for (const CheckRecord& r : rep.records) {
    if (r.m == "3") {
      CHECK(r.status == "fail");
      CHECK(r.note == "budget-exceeded");
      ++overflowed;
    } else {
      CHECK(r.note != "budget-exceeded");
    }
  }
  CHECK(overflowed == 4);
  CHECK_FALSE(rep.all_theorems_pass());
}
