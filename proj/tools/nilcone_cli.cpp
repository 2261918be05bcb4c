// Command line front end: exact nilpotent-cone counting, piece classification,
// witness construction, polynomial fitting and the verification suite.
//
// Exit codes: 0 success, 1 failed expectation, 2 usage/parse error, 3 budget.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nilcone/verify.hpp"

using namespace nilcone;

namespace {

std::vector<std::uint32_t> parse_q_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  if (out.empty()) throw CLI::ValidationError("--q", "expected a comma separated list");
  return out;
}

std::vector<fel> parse_coeffs(const std::string& s) {
  std::vector<fel> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<fel>(std::stoul(item)));
  }
  return out;
}

std::vector<int> parse_degrees(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

struct Output {
  std::string format = "table";
  std::string path;
  bool timings = false;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path);
    f << text;
  }
};

std::string render_reports(std::vector<CountReport> reports, const Output& out) {
  if (!out.timings)
    for (auto& r : reports) r.elapsed_ms = 0;  // byte-identical reruns by default
  std::ostringstream os;
  if (out.format == "csv") {
    os << CountReport::csv_header() << "\n";
    for (auto& r : reports) os << r.to_csv();
  } else if (out.format == "json") {
    os << "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      os << reports[i].to_json() << (i + 1 < reports.size() ? ",\n" : "\n");
    os << "]\n";
  } else {
    for (auto& r : reports) os << r.to_table();
  }
  return os.str();
}

int exit_code_for(const Error& e) {
  return e.code() == Errc::BudgetExceeded ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nilcone: exact classification and counting of nilpotent dual cones of\n"
      "classical Lie algebras over small finite fields"};
  app.require_subcommand(1);

  std::uint64_t budget_flag = 0;
  int shards = 0;
  Output output;
  app.add_option("--budget", budget_flag,
                 "enumeration budget (default: NILCONE_BUDGET or 2^32)");
  app.add_option("--shards", shards, "worker shard count (default: automatic)");
  app.add_option("--format", output.format, "output format: table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--output", output.path, "write the report to a file instead of stdout");
  app.add_flag("--timings", output.timings, "include wall-clock timings in reports");

  auto budget = [&]() {
    Budget b = Budget::from_env();
    if (budget_flag > 0) b.max_enum = budget_flag;
    return b;
  };

  // count
  std::string kind_s = "C", target_s = "coadjoint", q_list_s = "2";
  int rank = 1;
  auto* count_cmd = app.add_subcommand("count", "count nilpotent elements exactly");
  count_cmd->add_option("--kind", kind_s, "algebra kind: A, C or D")->required();
  count_cmd->add_option("--rank", rank, "rank (n for kind A, r for kinds C and D)")->required();
  count_cmd->add_option("--q", q_list_s, "field sizes, comma separated")->required();
  count_cmd->add_option("--target", target_s, "adjoint | coadjoint | transport")
      ->check(CLI::IsMember({"adjoint", "coadjoint", "transport"}));

  // pieces
  auto* pieces_cmd = app.add_subcommand("pieces", "classify the whole cone into pieces");
  pieces_cmd->add_option("--rank", rank, "symplectic rank r")->required();
  pieces_cmd->add_option("--q", q_list_s, "field sizes, comma separated")->required();

  // classify
  std::string form_s, form_file, grading_s;
  auto* classify_cmd =
      app.add_subcommand("classify", "piece label and triangularizing basis of one form");
  classify_cmd->add_option("--kind", kind_s, "only C is meaningful here");
  classify_cmd->add_option("--rank", rank, "symplectic rank r")->required();
  classify_cmd->add_option("--q", q_list_s, "field size")->required();
  classify_cmd->add_option(
      "--form", form_s,
      "upper-triangular coefficients q_ij (i<=j), row-major, comma separated");
  classify_cmd->add_option("--form-file", form_file, "file with one form per line");

  // witness
  auto* witness_cmd =
      app.add_subcommand("witness", "flag-moving stabilizer element of a graded form");
  witness_cmd->add_option("--rank", rank, "symplectic rank r")->required();
  witness_cmd->add_option("--q", q_list_s, "field size")->required();
  witness_cmd->add_option("--form", form_s, "form coefficients as in classify")->required();
  witness_cmd
      ->add_option("--grading", grading_s, "degree of each basis vector, comma separated")
      ->required();

  // fit
  int degree_bound = 8;
  auto* fit_cmd = app.add_subcommand("fit", "interpolate piece counts across field sizes");
  fit_cmd->add_option("--rank", rank, "symplectic rank r")->required();
  fit_cmd->add_option("--q", q_list_s, "field sizes (need degree+1 of them)")->required();
  fit_cmd->add_option("--degree-bound", degree_bound, "maximum polynomial degree");

  // verify
  std::uint64_t seed = 12345;
  auto* verify_cmd = app.add_subcommand("verify", "run the full acceptance suite");
  verify_cmd->add_option("--seed", seed, "seed for the randomized checks");

  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (count_cmd->parsed()) {
      Kind kind = kind_from_string(kind_s);
      std::vector<CountReport> reports;
      bool ok = true;
      for (auto q : parse_q_list(q_list_s)) {
        CountReport rep;
        if (target_s == "transport")
          rep = transport_census(kind, kind == Kind::A ? rank : 2 * rank, q, budget());
        else
          rep = count_nilpotent(kind, rank, q,
                                target_s == "adjoint" ? CountTarget::Adjoint
                                                      : CountTarget::Coadjoint,
                                budget(), shards);
        ok &= rep.ok;
        reports.push_back(std::move(rep));
      }
      output.write(render_reports(std::move(reports), output));
      return ok ? 0 : 1;
    }

    if (pieces_cmd->parsed()) {
      std::vector<CountReport> reports;
      bool ok = true;
      for (auto q : parse_q_list(q_list_s)) {
        auto rep = piece_census(rank, q, budget(), shards);
        ok &= rep.ok;
        reports.push_back(std::move(rep));
      }
      output.write(render_reports(std::move(reports), output));
      return ok ? 0 : 1;
    }

    if (classify_cmd->parsed()) {
      auto qs = parse_q_list(q_list_s);
      auto field = field_from_order(qs[0]);
      auto space = standard_symplectic(field, rank);
      std::vector<std::vector<fel>> forms;
      if (!form_s.empty()) forms.push_back(parse_coeffs(form_s));
      if (!form_file.empty()) {
        std::ifstream in(form_file);
        if (!in) {
          std::cerr << "cannot open " << form_file << "\n";
          return 2;
        }
        std::string line;
        while (std::getline(in, line))
          if (!line.empty()) forms.push_back(parse_coeffs(line));
      }
      if (forms.empty()) {
        std::cerr << "classify needs --form or --form-file\n";
        return 2;
      }
      std::ostringstream os;
      for (const auto& coeffs : forms) {
        QuadForm qf(space, coeffs);
        auto res = classify(qf);
        auto gb = good_basis(qf);
        os << "form";
        for (auto c : coeffs) os << " " << field->str(c);
        os << "\n  piece label: " << res.label.str() << "\n  filtration dims:";
        for (auto [a, d] : res.filtration.gr_dims()) os << " gr_" << a << "=" << d;
        os << "\n  good basis over F_" << gb.field->size()
           << (gb.ext_degree > 1 ? " (extended)" : "") << ":\n";
        for (int t = 0; t < gb.vectors.rows(); ++t) {
          os << "    e_" << gb.index_of_row(t) << " = (";
          for (int c = 0; c < gb.vectors.cols(); ++c)
            os << (c ? ", " : "") << gb.field->str(gb.vectors.at(t, c));
          os << ")\n";
        }
      }
      output.write(os.str());
      return 0;
    }

    if (witness_cmd->parsed()) {
      auto qs = parse_q_list(q_list_s);
      auto field = field_from_order(qs[0]);
      auto space = standard_symplectic(field, rank);
      QuadForm qf(space, parse_coeffs(form_s));
      SGoodGrading g{space, parse_degrees(grading_s)};
      std::vector<Mat> group;
      try {
        group = enumerate_group(Kind::C, 2 * rank, field);
      } catch (const Error&) {
        // fall back to the direct constructions only
      }
      auto w = witness(qf, g, group.empty() ? nullptr : &group);
      std::ostringstream os;
      os << "witness path: " << witness_path_name(w.path) << "\nB =\n";
      for (int r = 0; r < w.b.rows(); ++r) {
        os << "  ";
        for (int c = 0; c < w.b.cols(); ++c) os << field->str(w.b.at(r, c)) << " ";
        os << "\n";
      }
      output.write(os.str());
      return 0;
    }

    if (fit_cmd->parsed()) {
      auto qs = parse_q_list(q_list_s);
      std::map<std::string, std::vector<std::pair<std::uint64_t, std::uint64_t>>> pts;
      for (auto q : qs) {
        auto rep = piece_census(rank, q, budget(), shards);
        if (!rep.ok) return 1;
        for (auto& [label, v] : rep.counts) pts[label].emplace_back(q, v);
      }
      std::ostringstream os;
      bool ok = true;
      for (auto& [label, series] : pts) {
        int bound = std::min<int>(degree_bound, static_cast<int>(series.size()) - 1);
        auto fit = poly_fit(series, bound);
        os << label << ": ";
        if (!fit.consistent) {
          os << "inconsistent\n";
          ok = false;
          continue;
        }
        os << "coeffs (constant first):";
        for (auto& c : fit.coeffs) os << " " << c.str();
        os << (fit.integer_coeffs ? "" : "  [non-integer]") << "\n";
        ok &= fit.integer_coeffs;
      }
      output.write(os.str());
      return ok ? 0 : 1;
    }

    if (verify_cmd->parsed()) {
      VerifyOptions opts;
      opts.budget = budget();
      opts.shards = shards;
      opts.seed = seed;
      auto results = run_verification(opts, &std::cout);
      int failed = 0, skipped = 0;
      for (auto& r : results) {
        failed += !r.skipped && !r.pass;
        skipped += r.skipped;
      }
      std::cout << results.size() - failed - skipped << " passed, " << failed << " failed, "
                << skipped << " skipped\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
