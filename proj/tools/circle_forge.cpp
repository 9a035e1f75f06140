#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cforge/circle.hpp"
#include "cforge/experiments.hpp"
#include "cforge/lattice.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace cforge;

namespace {

json json_int(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json json_rat(const Rat& r) {
  return json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

json json_quad(const QuadratureResult& q) {
  return json{{"value", q.value},
              {"std_error", q.std_error},
              {"samples", q.samples},
              {"method", q.method}};
}

const char* verdict_str(PlaceVerdict v) {
  switch (v) {
    case PlaceVerdict::soluble: return "soluble";
    case PlaceVerdict::insoluble: return "insoluble";
    default: return "undetermined";
  }
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(parse_int(tok));
  }
  return out;
}

IntMatrix parse_rows(const std::string& s) {
  IntMatrix m;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (row.empty()) continue;
    m.push_back(parse_int_list(row));
  }
  return m;
}

CoeffVector make_coeffs(int n, int d, const std::string& list) {
  auto basis = shared_basis(n, d);
  auto entries = parse_int_list(list);
  if (entries.size() != basis->size())
    throw InvalidInput("coefficient list must have C(n+d-1,d) entries");
  return CoeffVector(basis, std::move(entries));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw InvalidInput("cannot open " + path);
    stream = &file;
  }
  void line(const json& j) { *stream << j.dump() << "\n"; }
};

json gate_json(const GateReport& g) {
  return json{{"N", json_int(g.N)},
              {"s", g.s},
              {"r", g.r},
              {"s_ge_3d", g.s_ge_3d},
              {"A_in_range", g.A_in_range},
              {"N_ge_moment_bound", g.N_ge_moment_bound},
              {"N_ge_census_bound", g.N_ge_census_bound},
              {"corollary_triple", g.corollary_triple},
              {"corollary_chain", g.corollary_chain},
              {"corollary_base", g.corollary_base}};
}

json rat_pair(const Rat& r) {
  return json::array({r.get_num().get_str(), r.get_den().get_str()});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circle-forge: exact circle-method bookkeeping and experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t cap = kDefaultCap;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "worker count");
  app.add_option("--cap", cap, "iteration cap before refusing");
  app.add_option("--out", out_path, "write JSON lines here instead of stdout");
  app.add_option("--csv", csv_path, "also write a CSV projection");

  int n = 2, d = 2, k = 2, s = 1;
  long Xl = 2, Al = 1, q = 1, aa = 0, L = 2, M = 16, p_max = 5, samples = 2000;
  int depth = 4, variant = 0;
  double Ad = 1, Xd = 2;
  std::string coeffs, rows, anchors = "1,1,1,1,1,1,1,1", alpha_str, b_str = "1";

  auto add_nd = [&](CLI::App* c) {
    c->add_option("--n", n, "number of variables");
    c->add_option("--d", d, "degree");
  };

  auto* c_basis = app.add_subcommand("basis", "monomial basis in lex order");
  add_nd(c_basis);

  auto* c_counti = app.add_subcommand("count-i", "I_a(X): zeros of f_a in [1,X]^n");
  add_nd(c_counti);
  c_counti->add_option("--X", Xl)->required();
  c_counti->add_option("--coeffs", coeffs)->required();

  auto* c_countu = app.add_subcommand("count-u", "one-equation count U_s(A,X)");
  c_countu->add_option("--s", s)->required();
  c_countu->add_option("--d", d)->required();
  c_countu->add_option("--A", Al)->required();
  c_countu->add_option("--X", Xl)->required();

  auto* c_countn = app.add_subcommand("count-n", "two-equation shell count N(A,X)");
  c_countn->add_option("--s", s)->required();
  c_countn->add_option("--d", d)->required();
  c_countn->add_option("--A", Al)->required();
  c_countn->add_option("--X", Xl)->required();

  std::string d_str = "2";
  auto* c_psi = app.add_subcommand("psi", "congruence count psi_s(X,D)");
  c_psi->add_option("--s", s)->required();
  c_psi->add_option("--d", d)->required();
  c_psi->add_option("--X", Xl)->required();
  c_psi->add_option("--D", d_str)->required();
  c_psi->add_option("--anchors", anchors, "x1,x2,y1,y2,z1,z2,w1,w2");
  c_psi->add_option("--variant", variant, "0 = all pairs, 1 = against-third");

  auto* c_xi = app.add_subcommand("xi", "Xi_d(X), exact rational");
  c_xi->add_option("--d", d)->required();
  c_xi->add_option("--X", Xl)->required();

  auto* c_lat = app.add_subcommand("lattice", "determinant, minor gcd, orthogonal lattice");
  c_lat->add_option("--n", n)->required();
  c_lat->add_option("--rows", rows, "basis rows: 'a,b,c;d,e,f'")->required();
  c_lat->add_option("--A", Al, "if > 0, count lattice points with ||v|| <= A");

  auto* c_arcs = app.add_subcommand("arcs", "major-arc decomposition");
  c_arcs->add_option("--B", b_str)->required();
  c_arcs->add_option("--A", Ad)->required();
  c_arcs->add_option("--X", Xd)->required();
  c_arcs->add_option("--d", d)->required();
  c_arcs->add_option("--alpha", alpha_str, "classify this point (rational)");

  auto* c_sums = app.add_subcommand("sums", "complete exponential sums");
  add_nd(c_sums);
  c_sums->add_option("--q", q)->required();
  c_sums->add_option("--a", aa, "for the one-variable sum S(q,a)");
  c_sums->add_option("--coeffs", coeffs, "for the averaged sum S_a(q)");

  auto* c_moment = app.add_subcommand("moment", "moment of the Weyl product");
  c_moment->add_option("--s", s)->required();
  c_moment->add_option("--d", d)->required();
  c_moment->add_option("--A", Al)->required();
  c_moment->add_option("--X", Xl)->required();

  auto* c_sigma = app.add_subcommand("sigma", "local density sigma(a;L)");
  add_nd(c_sigma);
  c_sigma->add_option("--coeffs", coeffs)->required();
  c_sigma->add_option("--L", L)->required();

  auto* c_series = app.add_subcommand("series", "truncated singular series and tail");
  add_nd(c_series);
  c_series->add_option("--k", k);
  c_series->add_option("--A", Ad)->required();
  c_series->add_option("--X", Xd)->required();
  c_series->add_option("--coeffs", coeffs)->required();

  auto* c_jstar = app.add_subcommand("jstar", "singular integral J*_a");
  add_nd(c_jstar);
  c_jstar->add_option("--k", k);
  c_jstar->add_option("--A", Ad)->required();
  c_jstar->add_option("--X", Xd)->required();
  c_jstar->add_option("--coeffs", coeffs)->required();
  c_jstar->add_option("--samples", samples);

  auto* c_jw = app.add_subcommand("jw", "truncated singular integral J_a(w)");
  add_nd(c_jw);
  c_jw->add_option("--k", k);
  c_jw->add_option("--A", Ad)->required();
  c_jw->add_option("--X", Xd)->required();
  c_jw->add_option("--coeffs", coeffs)->required();
  c_jw->add_option("--samples", samples);

  auto* c_local = app.add_subcommand("local", "local solubility verdict");
  add_nd(c_local);
  c_local->add_option("--coeffs", coeffs)->required();
  c_local->add_option("--pmax", p_max);
  c_local->add_option("--depth", depth);

  auto* c_var = app.add_subcommand("variance", "variance experiment over the thin set");
  auto* c_census = app.add_subcommand("census", "threshold census over the thin set");

  auto* c_gate = app.add_subcommand("gate", "theorem hypothesis gate");
  add_nd(c_gate);
  c_gate->add_option("--k", k);
  c_gate->add_option("--A", Ad)->required();
  c_gate->add_option("--X", Xd)->required();

  auto* c_m = app.add_subcommand("arc-count", "arc-restricted count I_a(X,B)");
  add_nd(c_m);
  c_m->add_option("--X", Xl)->required();
  c_m->add_option("--coeffs", coeffs)->required();
  c_m->add_option("--M", M, "grid resolution")->required();
  c_m->add_option("--B", b_str, "restrict to the major arcs M(B); 0 = full circle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Output out;
  try {
    out.open(out_path);

    if (*c_basis) {
      auto basis = build_basis(n, d);
      json j{{"n", n}, {"d", d}, {"N", basis.size()}, {"exponents", basis.exponents}};
      out.line(j);
    } else if (*c_counti) {
      auto a = make_coeffs(n, d, coeffs);
      out.line(json{{"I", json_int(count_I(a, Xl, cap))}});
    } else if (*c_countu) {
      CountingInstance inst{s, d, Al, Xl, false};
      out.line(json{{"U", json_int(count_U(inst, cap))}});
    } else if (*c_countn) {
      CountingInstance inst{s, d, Al, Xl, true};
      auto r = count_N(inst, cap);
      out.line(json{{"N", json_int(r.total)},
                    {"N1", json_int(r.dependent)},
                    {"N2", json_int(r.independent)}});
    } else if (*c_psi) {
      auto av = parse_int_list(anchors);
      if (av.size() != 8) throw InvalidInput("psi: anchors needs 8 values");
      std::array<long, 8> anchor;
      for (int i = 0; i < 8; ++i) anchor[i] = av[i].get_si();
      Int D = parse_int(d_str);
      Int v = count_psi(s, d, Xl, D, anchor,
                        variant ? PsiVariant::AgainstThird
                                : PsiVariant::FullPairwise,
                        cap);
      out.line(json{{"psi", json_int(v)}});
    } else if (*c_xi) {
      Rat v = xi_sum(d, Xl, cap);
      out.line(json_rat(v));
    } else if (*c_lat) {
      IntegerLattice lat(n, parse_rows(rows));
      auto perp = orthogonal_lattice(lat);
      json j{{"n", n},
             {"rank", lat.rank()},
             {"det_squared", json_int(det_squared(lat))},
             {"minor_gcd", json_int(minor_gcd(lat))},
             {"orthogonal",
              json{{"n", perp.ambient_dim()}, {"basis", json::array()}}}};
      for (const auto& row : perp.basis()) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.get_str());
        j["orthogonal"]["basis"].push_back(r);
      }
      if (c_lat->count("--A")) {
        j["box_count"] = json_int(count_points_in_box(lat, Int(Al), cap));
      }
      out.line(j);
    } else if (*c_arcs) {
      auto dec = build_arcs(parse_rat(b_str), Rat(Ad), Rat(Xd), d);
      json j{{"B", rat_pair(dec.B)},
             {"half_width", rat_pair(dec.half_width)},
             {"count", dec.arcs.size()},
             {"measure", rat_pair(arc_measure(dec))}};
      json arr = json::array();
      for (const auto& arc : dec.arcs)
        arr.push_back(json{{"q", arc.q},
                           {"a", arc.a},
                           {"lo", rat_pair(arc.lo)},
                           {"hi", rat_pair(arc.hi)}});
      j["arcs"] = arr;
      if (!alpha_str.empty()) {
        auto cls = classify(parse_rat(alpha_str), dec);
        j["classify"] = json{{"major", cls.major}, {"q", cls.q}, {"a", cls.a}};
      }
      out.line(j);
    } else if (*c_sums) {
      json j{{"q", q}, {"d", d}};
      if (c_sums->count("--a")) {
        Cplx g = gauss_sum(q, aa, d);
        j["gauss"] = json{{"re", g.real()}, {"im", g.imag()}};
      }
      if (!coeffs.empty()) {
        auto a = make_coeffs(n, d, coeffs);
        j["S_a"] = json_rat(local_exp_sum_exact(a, q, cap));
      }
      out.line(j);
    } else if (*c_moment) {
      out.line(json{{"moment", json_int(moment_count(s, Al, Xl, d, cap))}});
    } else if (*c_sigma) {
      auto a = make_coeffs(n, d, coeffs);
      out.line(json_rat(local_density(a, Int(L), cap)));
    } else if (*c_series) {
      auto a = make_coeffs(n, d, coeffs);
      auto params = make_params(n, d, k, Ad, Xd);
      Rat s_star = truncated_singular_series(a, params, cap);
      auto tail = tail_terms(a, params, cap);
      json qs = json::array();
      for (const auto& qv : tail.q_set) qs.push_back(json_int(qv));
      out.line(json{{"S_star", json_rat(s_star)},
                    {"W", json_int(params.W)},
                    {"tail_q", qs},
                    {"E", json_rat(tail.e_exact)}});
    } else if (*c_jstar) {
      auto a = make_coeffs(n, d, coeffs);
      auto params = make_params(n, d, k, Ad, Xd);
      out.line(json_quad(singular_integral_star(a, params, samples, seed)));
    } else if (*c_jw) {
      auto a = make_coeffs(n, d, coeffs);
      auto params = make_params(n, d, k, Ad, Xd);
      out.line(json_quad(singular_integral_w(a, params, samples, seed)));
    } else if (*c_local) {
      auto a = make_coeffs(n, d, coeffs);
      auto v = check_local_solubility(a, p_max, depth, cap);
      json pp = json::object(), certs = json::object();
      for (const auto& [p, verdict] : v.per_prime)
        pp[std::to_string(p)] = verdict_str(verdict);
      for (const auto& [p, cert] : v.certificates)
        certs[std::to_string(p)] = json{{"depth", cert.depth},
                                        {"x", cert.x},
                                        {"grad_coord", cert.grad_coord},
                                        {"grad_valuation", cert.grad_valuation},
                                        {"verified", verify_certificate(a, cert)}};
      out.line(json{{"real_place", verdict_str(v.real_place)},
                    {"per_prime", pp},
                    {"certificates", certs},
                    {"overall", v.overall == PlaceVerdict::soluble
                                    ? "locally_soluble"
                                : v.overall == PlaceVerdict::insoluble
                                    ? "locally_obstructed"
                                    : "undetermined"}});
    } else if (*c_var || *c_census) {
      if (config_path.empty())
        throw InvalidInput("variance/census need --config");
      ExperimentConfig cfg = parse_config(read_file(config_path));
      if (app.count("--seed")) cfg.seed = seed;
      cfg.threads = threads;
      if (app.count("--cap")) cfg.cap = cap;
      if (*c_var) {
        auto rep = run_variance_experiment(cfg);
        std::ofstream csv;
        if (!csv_path.empty()) {
          csv.open(csv_path);
          if (!csv) throw InvalidInput("cannot open " + csv_path);
          csv << "a,I,S_star_num,S_star_den,J_star,J_star_err,residual\n";
        }
        for (const auto& rec : rep.records) {
          json ja = json::array();
          std::string joined;
          for (size_t i = 0; i < rec.a.size(); ++i) {
            ja.push_back(rec.a[i].get_str());
            if (i) joined += ';';
            joined += rec.a[i].get_str();
          }
          out.line(json{{"a", ja},
                        {"I", json_int(rec.i_value)},
                        {"S_star", json_rat(rec.s_star)},
                        {"J_star", json_quad(rec.j_star)},
                        {"residual", rec.residual}});
          if (csv.is_open())
            csv << joined << ',' << rec.i_value.get_str() << ','
                << rec.s_star.get_num().get_str() << ','
                << rec.s_star.get_den().get_str() << ','
                << json(rec.j_star.value).dump() << ','
                << json(rec.j_star.std_error).dump() << ','
                << json(rec.residual).dump() << "\n";
        }
        json curve = json::array();
        for (auto [delta, ratio] : rep.delta_curve)
          curve.push_back(json{{"delta", delta}, {"ratio", ratio}});
        out.line(json{{"summary",
                       json{{"complete", rep.complete},
                            {"thin_set_size", json_int(rep.thin_set_size)},
                            {"sampling_fraction", rep.sampling_fraction},
                            {"aggregate", rep.aggregate},
                            {"comparator", rep.comparator},
                            {"ratio", rep.ratio},
                            {"delta_curve", curve},
                            {"gate", gate_json(rep.gate)}}}});
      } else {
        auto rep = run_threshold_census(cfg);
        json pb = json::array();
        for (const auto& [eta, tally] : rep.predictor_below)
          pb.push_back(json{{"eta", eta}, {"count", json_int(tally)}});
        out.line(json{{"thin_set_size", json_int(rep.thin_set_size)},
                      {"locally_soluble", json_int(rep.locally_soluble)},
                      {"complete", rep.complete},
                      {"predictor_below", pb},
                      {"true_below", json_int(rep.true_below)}});
      }
    } else if (*c_gate) {
      auto params = make_params(n, d, k, Ad, Xd);
      out.line(gate_json(hypothesis_gate(params)));
    } else if (*c_m) {
      auto a = make_coeffs(n, d, coeffs);
      std::vector<std::pair<Rat, Rat>> region{{Rat(0), Rat(1)}};
      Rat B = parse_rat(b_str);
      if (B > 0) {
        auto dec = build_arcs(B, Rat(1), Rat(Xl), d);
        region.clear();
        for (const auto& arc : dec.arcs) region.emplace_back(arc.lo, arc.hi);
      }
      out.line(json{{"count", arc_restricted_count(a, Xl, region, M, cap)}});
    }
  } catch (const CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
