#include "dmlat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dmlat/group_spec.hpp"
#include "dmlat/oracle.hpp"

namespace dmlat {

namespace {

using json = nlohmann::ordered_json;

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - t0_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point t0_ = clock::now();
};

json base_json(const std::string& input, const GroupType& t) {
  json j;
  j["input"] = input;
  j["canonical_type"] = format_group_spec(t);
  j["order"] = t.order().str();
  return j;
}

// Maps the exceptions shared by all subcommands to exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const spec_parse_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const method_unavailable_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnavailable;
  } catch (const oracle_scale_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnavailable;
  }
}

std::string method_label(DmMethod m) { return to_string(m); }

}  // namespace

int run_dm(const std::string& spec, const std::string& method, const CliOptions& opt,
           std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    DmOptions dopt;
    dopt.limits = opt.limits;
    if (method == "auto") {
      dopt.mode = DmOptions::Mode::automatic;
    } else if (method == "formula") {
      dopt.mode = DmOptions::Mode::formula;
    } else if (method == "oracle") {
      dopt.mode = DmOptions::Mode::oracle;
    } else {
      err << "error: unknown method '" << method << "' (expected auto|formula|oracle)\n";
      return kExitUsage;
    }
    GroupType t = parse_group_spec(spec);
    DmResult r = dm(t, dopt);
    if (opt.json) {
      json j = base_json(spec, t);
      j["value"] = r.value.str();
      j["method"] = method_label(r.method);
      json parts = json::array();
      for (const auto& c : r.parts) {
        parts.push_back({{"prime", std::to_string(c.type.prime())},
                         {"type", format_group_spec(GroupType({c.type}))},
                         {"dm", c.dm.str()},
                         {"lattice_size", c.lattice_size.str()},
                         {"method", method_label(c.method)}});
      }
      j["components"] = std::move(parts);
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
    } else {
      out << "dm(" << format_group_spec(t) << ") = " << r.value.str() << "\n";
      out << "method: " << method_label(r.method) << "\n";
      if (r.parts.size() > 1) {
        for (const auto& c : r.parts) {
          out << "  p=" << c.type.prime() << "  " << format_group_spec(GroupType({c.type}))
              << "  dm=" << c.dm.str() << "  |L|=" << c.lattice_size.str() << "  ["
              << method_label(c.method) << "]\n";
        }
      }
    }
    return kExitOk;
  });
}

int run_verify(const std::string& spec, const CliOptions& opt, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    GroupType t = parse_group_spec(spec);
    DmOptions dopt;
    dopt.limits = opt.limits;

    std::vector<std::pair<std::string, Count>> values;

    DmResult formula = dm(t, dopt);
    values.emplace_back("formula(" + method_label(formula.method) + ")", formula.value);

    // Independent formula routes, where they apply.
    if (t.components().size() == 1) {
      const PPartition& c = t.components()[0];
      if (c.elementary() && c.rank() >= 1) {
        values.emplace_back("elementary", dm_elementary(c.rank(), c.prime()));
      }
      if (c.rank() == 2) {
        values.emplace_back("rank2", dm_rank2(c.exponents()[0], c.exponents()[1], c.prime()));
        if (auto s = dm_corollary_shortcuts(c.exponents()[0], c.exponents()[1], c.prime())) {
          values.emplace_back("corollary-3.3", *s);
        }
      }
    }
    // Master sum per component (checks Eq.-4 machinery against closed forms).
    {
      bool ok = true;
      std::map<uint64_t, Count> dms, lats;
      for (const auto& c : t.components()) {
        if (c.order() > opt.limits.order_cap) {
          ok = false;
          break;
        }
        auto lat = SubgroupLattice::enumerate(build_group(GroupType({c}), opt.limits), opt.limits);
        dms[c.prime()] = dm_master_sum(c, section_census(lat));
        lats[c.prime()] = lat.size();
      }
      if (ok && !t.trivial()) {
        values.emplace_back("master-sum",
                            t.components().size() == 1 ? dms.begin()->second
                                                       : dm_multiprime(t, dms, lats));
      }
    }
    // The ground truth.
    DmOptions oopt = dopt;
    oopt.mode = DmOptions::Mode::oracle;
    DmResult oracle = dm(t, oopt);
    values.emplace_back("oracle", oracle.value);

    bool unanimous = std::all_of(values.begin(), values.end(), [&](const auto& v) {
      return v.second == values.front().second;
    });

    if (opt.json) {
      json j = base_json(spec, t);
      json vals;
      for (const auto& [name, v] : values) vals[name] = v.str();
      j["values"] = std::move(vals);
      j["method"] = "verify";
      j["pass"] = unanimous;
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
    } else {
      out << "verify " << format_group_spec(t) << "  (order " << t.order().str() << ")\n";
      for (const auto& [name, v] : values) {
        out << "  " << std::left << std::setw(24) << name << " " << v.str() << "\n";
      }
      out << (unanimous ? "PASS: all methods agree" : "FAIL: methods disagree") << "\n";
    }
    return unanimous ? kExitOk : kExitMismatch;
  });
}

int run_sections(const std::string& spec, const CliOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    GroupType t = parse_group_spec(spec);
    auto lat = SubgroupLattice::enumerate(build_group(t, opt.limits), opt.limits);
    SectionCensus census = section_census(lat);

    // The S x S rows drive the diamond count: n_{SxS} primary diamonds each.
    struct Row {
      GroupType section;
      GroupType doubled;
      Count n;
      Count per_section;
      Count subtotal;
    };
    std::vector<Row> classes;
    Count total = 0;
    for (const auto& [type, n] : census.counts) {
      if (type.trivial() || type.components().size() != 1) continue;
      const PPartition& comp = type.components()[0];
      const auto& e = comp.exponents();
      std::vector<uint32_t> half;
      bool even = true;
      for (size_t i = 0; i < e.size();) {
        size_t j = i;
        while (j < e.size() && e[j] == e[i]) ++j;
        if ((j - i) % 2) {
          even = false;
          break;
        }
        for (size_t k = 0; k < (j - i) / 2; ++k) half.push_back(e[i]);
        i = j;
      }
      if (!even) continue;
      PPartition s(comp.prime(), half);
      Count per = primary_diamond_count(s);
      classes.push_back({GroupType({s}), type, n, per, n * per});
      total += n * per;
    }

    if (opt.json) {
      json j = base_json(spec, t);
      json cens = json::array();
      for (const auto& [type, n] : census.counts) {
        cens.push_back({{"type", format_group_spec(type)}, {"count", n.str()}});
      }
      j["census"] = std::move(cens);
      json cls = json::array();
      for (const auto& r : classes) {
        cls.push_back({{"section", format_group_spec(r.section)},
                       {"doubled", format_group_spec(r.doubled)},
                       {"count", r.n.str()},
                       {"per_section", r.per_section.str()},
                       {"subtotal", r.subtotal.str()}});
      }
      j["diamond_classes"] = std::move(cls);
      j["value"] = total.str();
      j["method"] = "oracle-census";
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
    } else {
      out << "sections of " << format_group_spec(t) << "  (order " << t.order().str()
          << ", |L| = " << lat.size() << ")\n\n";
      out << std::left << std::setw(24) << "section type" << std::right << std::setw(12) << "n_S(G)"
          << "\n";
      for (const auto& [type, n] : census.counts) {
        out << std::left << std::setw(24) << format_group_spec(type) << std::right << std::setw(12)
            << n.str() << "\n";
      }
      out << "\ndiamond classes (sections of shape S x S):\n";
      out << std::left << std::setw(16) << "S" << std::setw(24) << "S x S" << std::right
          << std::setw(10) << "n_{SxS}" << std::setw(14) << "per-section" << std::setw(14)
          << "subtotal" << "\n";
      for (const auto& r : classes) {
        out << std::left << std::setw(16) << format_group_spec(r.section) << std::setw(24)
            << format_group_spec(r.doubled) << std::right << std::setw(10) << r.n.str()
            << std::setw(14) << r.per_section.str() << std::setw(14) << r.subtotal.str() << "\n";
      }
      out << "\ndm(" << format_group_spec(t) << ") = " << total.str() << "\n";
    }
    return kExitOk;
  });
}

int run_aut(const std::string& spec, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    GroupType t = parse_group_spec(spec);
    Count a = aut_order(t);
    if (opt.json) {
      json j = base_json(spec, t);
      j["value"] = a.str();
      j["method"] = "aut-order-formula";
      json parts = json::array();
      for (const auto& c : t.components()) {
        parts.push_back({{"prime", std::to_string(c.prime())},
                         {"type", format_group_spec(GroupType({c}))},
                         {"aut_order", aut_order(c).str()}});
      }
      j["components"] = std::move(parts);
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
    } else {
      out << "|Aut(" << format_group_spec(t) << ")| = " << a.str() << "\n";
      if (t.components().size() > 1) {
        for (const auto& c : t.components()) {
          out << "  p=" << c.prime() << "  " << format_group_spec(GroupType({c})) << "  |Aut| = "
              << aut_order(c).str() << "\n";
        }
      }
    }
    return kExitOk;
  });
}

int run_subgroups(const std::string& spec, bool dump, const CliOptions& opt, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    GroupType t = parse_group_spec(spec);

    // Closed form when every component is elementary or of rank <= 2.
    Count closed = 1;
    bool have_closed = true;
    for (const auto& c : t.components()) {
      if (auto l = lattice_size_closed_form(c)) {
        closed *= *l;
      } else {
        have_closed = false;
        break;
      }
    }

    bool oracle_ran = false;
    std::vector<std::pair<uint32_t, uint64_t>> by_order;
    Count value;
    std::ostringstream dump_text;
    if (have_closed && !dump) {
      value = closed;
    } else {
      auto lat = SubgroupLattice::enumerate(build_group(t, opt.limits), opt.limits);
      value = lat.size();
      oracle_ran = true;
      for (uint32_t i = 0; i < lat.size(); ++i) {
        if (by_order.empty() || by_order.back().first != lat.order(i)) {
          by_order.emplace_back(lat.order(i), 1);
        } else {
          ++by_order.back().second;
        }
      }
      if (dump) dump_lattice(dump_text, lat);
      if (have_closed && closed != value) {
        err << "internal error: closed form " << closed.str() << " != oracle " << value.str()
            << "\n";
        return kExitMismatch;
      }
    }

    if (opt.json) {
      json j = base_json(spec, t);
      j["value"] = value.str();
      j["method"] = oracle_ran ? "oracle" : "closed-form";
      if (oracle_ran) {
        json bo = json::array();
        for (auto [o, c] : by_order) {
          bo.push_back({{"order", std::to_string(o)}, {"count", std::to_string(c)}});
        }
        j["by_order"] = std::move(bo);
      }
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
      if (dump) out << dump_text.str();
    } else {
      out << "|L(" << format_group_spec(t) << ")| = " << value.str()
          << (oracle_ran ? "" : "   (closed form)") << "\n";
      if (oracle_ran && by_order.size() > 1) {
        out << "by order:\n";
        for (auto [o, c] : by_order) {
          out << "  " << std::setw(8) << o << " : " << c << "\n";
        }
      }
      if (dump) out << dump_text.str();
    }
    return kExitOk;
  });
}

int run_survey(uint64_t prime, uint32_t exponent, const std::string& sort, const CliOptions& opt,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    Timer timer;
    if (!is_prime_u64(prime)) {
      err << "error: --prime " << prime << " is not prime\n";
      return kExitUsage;
    }
    if (exponent < 1) {
      err << "error: --exponent must be >= 1\n";
      return kExitUsage;
    }
    if (sort != "dm" && sort != "lex") {
      err << "error: unknown sort '" << sort << "' (expected dm|lex)\n";
      return kExitUsage;
    }

    struct Row {
      std::vector<uint32_t> key;  // exponents, nonincreasing
      GroupType type;
      bool available = false;
      Count dm_value;
      DmMethod method = DmMethod::oracle;
    };
    std::vector<Row> rows;
    for (const auto& part : partitions_of(exponent)) {
      Row r;
      r.key.assign(part.rbegin(), part.rend());
      r.type = GroupType({PPartition(prime, part)});
      try {
        DmOptions dopt;
        dopt.limits = opt.limits;
        DmResult res = dm(r.type, dopt);
        r.available = true;
        r.dm_value = res.value;
        r.method = res.parts.empty() ? res.method : res.parts[0].method;
      } catch (const method_unavailable_error&) {
      } catch (const oracle_scale_error&) {
      }
      rows.push_back(std::move(r));
    }

    // Types ordered by the lexicographic order on their nonincreasing exponent
    // tuples; the table prints the highest key first (the cyclic type), so the
    // conjectured pattern reads as strictly increasing dm down the table.
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key > b.key; });
    std::vector<std::string> violations;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
      if (rows[i].available && rows[i + 1].available && rows[i].dm_value >= rows[i + 1].dm_value) {
        violations.push_back("dm(" + format_group_spec(rows[i].type) +
                             ") >= dm(" + format_group_spec(rows[i + 1].type) + ")");
      }
    }
    std::vector<size_t> lex_rank(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) lex_rank[i] = i + 1;

    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (sort == "dm") {
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (rows[a].available != rows[b].available) return rows[b].available;
        return rows[a].dm_value < rows[b].dm_value;
      });
    }

    if (opt.json) {
      json j;
      j["input"] = "p=" + std::to_string(prime) + " n=" + std::to_string(exponent);
      j["canonical_type"] = "Z" + std::to_string(prime) + "-groups of order " +
                            pow_count(prime, exponent).str();
      j["order"] = pow_count(prime, exponent).str();
      json rs = json::array();
      for (size_t oi : order) {
        const Row& r = rows[oi];
        json row = {{"lex_rank", lex_rank[oi]},
                    {"type", format_group_spec(r.type)},
                    {"dm", r.available ? r.dm_value.str() : "unavailable"}};
        if (r.available) row["method"] = method_label(r.method);
        rs.push_back(std::move(row));
      }
      j["values"] = std::move(rs);
      j["method"] = "survey";
      j["conjecture_violations"] = violations;
      j["timings"] = {{"total_ms", timer.ms()}};
      out << j.dump(2) << "\n";
    } else {
      out << "survey: abelian " << prime << "-groups of order " << prime << "^" << exponent
          << "\n";
      out << std::right << std::setw(5) << "lex" << "  " << std::left << std::setw(28) << "type"
          << std::left << std::setw(20) << "dm" << "method\n";
      for (size_t oi : order) {
        const Row& r = rows[oi];
        out << std::right << std::setw(5) << lex_rank[oi] << "  " << std::left << std::setw(28)
            << format_group_spec(r.type) << std::setw(20)
            << (r.available ? r.dm_value.str() : "unavailable")
            << (r.available ? method_label(r.method) : "-") << "\n";
      }
      if (violations.empty()) {
        out << "conjectured ordering holds on this table\n";
      } else {
        for (const auto& v : violations) out << "ordering violation: " << v << "\n";
      }
    }
    return kExitOk;
  });
}

}  // namespace dmlat
