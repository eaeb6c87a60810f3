#include "circadia/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "circadia/circular.hpp"
#include "circadia/csv.hpp"
#include "circadia/parallel.hpp"

namespace circadia {

const char* subset_name(Subset s) { return s == Subset::all ? "all" : "pre_covid"; }

namespace {

constexpr std::array<Season, 3> kNonWinter = {Season::spring, Season::summer, Season::autumn};

// Candidate columns in the documented order, before constant-column drops.
struct ColumnPlan {
  std::string name;
  bool droppable = false;  // covariates may drop when constant on the subset
};

std::vector<ColumnPlan> plan_columns(int model_id, const AnalysisConfig& cfg) {
  std::vector<ColumnPlan> plan;
  plan.push_back({"intercept", false});
  plan.push_back({"phq8", false});
  plan.push_back({"age_c", true});
  plan.push_back({"female", true});
  for (std::size_t s = 1; s < cfg.sites.size(); ++s)
    plan.push_back({"site_" + cfg.sites[s], true});
  plan.push_back({"employed", true});
  plan.push_back({"lockdown", true});
  if (model_id >= 2)
    for (Season s : kNonWinter) plan.push_back({std::string("season_") + season_name(s), true});
  if (model_id >= 3)
    for (Season s : kNonWinter) plan.push_back({std::string("phq8_x_") + season_name(s), true});
  return plan;
}

double column_value(const FeatureRow& r, const std::string& name, double age_center) {
  if (name == "intercept") return 1.0;
  if (name == "phq8") return static_cast<double>(r.score);
  if (name == "age_c") return static_cast<double>(r.age_years) - age_center;
  if (name == "female") return r.gender == Gender::female ? 1.0 : 0.0;
  if (name == "employed") return r.employed ? 1.0 : 0.0;
  if (name == "lockdown") return r.lockdown ? 1.0 : 0.0;
  if (name.rfind("site_", 0) == 0) return r.site == name.substr(5) ? 1.0 : 0.0;
  if (name.rfind("season_", 0) == 0)
    return season_name(r.season) == name.substr(7) ? 1.0 : 0.0;
  if (name.rfind("phq8_x_", 0) == 0)
    return season_name(r.season) == name.substr(7) ? static_cast<double>(r.score) : 0.0;
  throw StatsError("unknown design column " + name);
}

}  // namespace

Design build_design(const FeatureTable& table, FeatureId response, const ModelSpec& spec,
                    const AnalysisConfig& cfg) {
  Design d;

  // Row selection: subset membership and an available response, in
  // (participant, time) order so groups are contiguous.
  std::vector<const FeatureRow*> rows;
  for (const FeatureRow& r : table) {
    if (spec.subset == Subset::pre_covid && !r.pre_covid) continue;
    if (!r.value(response)) {
      ++d.n_dropped_na;
      continue;
    }
    rows.push_back(&r);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const FeatureRow* a, const FeatureRow* b) {
    if (a->participant_id != b->participant_id) return a->participant_id < b->participant_id;
    return a->phq_completion.utc_epoch_seconds < b->phq_completion.utc_epoch_seconds;
  });
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw StatsError("empty design: no rows with available response");

  double age_sum = 0;
  for (const FeatureRow* r : rows) age_sum += r->age_years;
  d.age_center = age_sum / n;

  d.y.resize(n);
  for (int i = 0; i < n; ++i) d.y[i] = *rows[static_cast<std::size_t>(i)]->value(response);
  if ((d.y.array() == d.y[0]).all()) throw StatsError("constant response");

  // Materialize candidate columns, dropping droppable constants.
  std::vector<ColumnPlan> plan = plan_columns(spec.model_id, cfg);
  std::vector<Vector> cols;
  for (const ColumnPlan& c : plan) {
    Vector v(n);
    for (int i = 0; i < n; ++i)
      v[i] = column_value(*rows[static_cast<std::size_t>(i)], c.name, d.age_center);
    bool constant = (v.array() == v[0]).all();
    if (constant && c.name != "intercept") {
      if (!c.droppable) throw StatsError("constant column " + c.name);
      d.dropped_columns.push_back(c.name);
      continue;
    }
    d.column_names.push_back(c.name);
    cols.push_back(std::move(v));
  }

  d.X.resize(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) d.X.col(static_cast<Eigen::Index>(j)) = cols[j];

  Eigen::ColPivHouseholderQR<Matrix> qr(d.X);
  qr.setThreshold(1e-10);
  if (qr.rank() < d.X.cols()) {
    // Columns pivoted past the numerical rank are the dependent ones.
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < d.X.cols(); ++k) {
      if (!names.empty()) names += ", ";
      names += d.column_names[static_cast<std::size_t>(perm[k])];
    }
    throw StatsError("collinear design columns: " + names);
  }

  for (const FeatureRow* r : rows) {
    if (d.group_ids.empty() || d.group_ids.back() != r->participant_id) {
      d.group_ids.push_back(r->participant_id);
      d.group_sizes.push_back(1);
    } else {
      ++d.group_sizes.back();
    }
  }
  return d;
}

std::vector<double> bh_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  std::vector<double> adjusted(m);
  double running_min = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    // Ratio first: the top rank's factor is then exactly 1, so the adjusted
    // value can never round below the raw p it dominates.
    double ratio = static_cast<double>(m) / static_cast<double>(k + 1);
    running_min = std::min(running_min, p_values[order[k]] * ratio);
    adjusted[order[k]] = std::min(1.0, running_min);
  }
  return adjusted;
}

int select_model(double p_adj_12, double p_adj_23, double alpha) {
  if (p_adj_23 < alpha) return 3;
  if (p_adj_12 < alpha) return 2;
  return 1;
}

std::string stars_for(double p_adj) {
  if (p_adj < 0.001) return "***";
  if (p_adj < 0.01) return "**";
  if (p_adj < 0.05) return "*";
  return "";
}

namespace {

struct FeatureAnalysis {
  std::string feature;
  Subset subset = Subset::all;
  bool fitted = false;
  std::string failure;
  std::array<Design, 3> designs;
  std::array<LmmFit, 3> fits;
  LrtResult lrt_12, lrt_23;
};

FeatureAnalysis analyze_feature(const FeatureTable& table, FeatureId feature, Subset subset,
                                const AnalysisConfig& cfg) {
  FeatureAnalysis a;
  a.feature = std::string(feature_column(feature));
  a.subset = subset;
  try {
    for (int m = 1; m <= 3; ++m) {
      ModelSpec spec{m, subset};
      a.designs[static_cast<std::size_t>(m - 1)] = build_design(table, feature, spec, cfg);
      Design& d = a.designs[static_cast<std::size_t>(m - 1)];
      a.fits[static_cast<std::size_t>(m - 1)] = fit_lmm_ml(d.X, d.y, d.group_sizes);
      if (!a.fits[static_cast<std::size_t>(m - 1)].converged)
        throw StatsError("model " + std::to_string(m) + " did not converge");
    }
    a.lrt_12 = lrt(a.fits[0], a.fits[1]);
    a.lrt_23 = lrt(a.fits[1], a.fits[2]);
    a.fitted = true;
  } catch (const std::exception& e) {
    a.failure = e.what();
  }
  return a;
}

}  // namespace

AnalysisResult run_analysis(const FeatureTable& table, const AnalysisConfig& cfg,
                            const std::vector<Subset>& subsets, int threads) {
  struct Task {
    FeatureId feature;
    Subset subset;
  };
  std::vector<Task> tasks;
  for (Subset subset : subsets)
    for (int f = 0; f < kFeatureCount; ++f) tasks.push_back({static_cast<FeatureId>(f), subset});

  std::vector<FeatureAnalysis> analyses(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
    const Task& t = tasks[static_cast<std::size_t>(i)];
    analyses[static_cast<std::size_t>(i)] = analyze_feature(table, t.feature, t.subset, cfg);
  });

  AnalysisResult result;

  // Likelihood-ratio rows with BH across the features of each
  // (subset, comparison) family.
  for (Subset subset : subsets) {
    for (const char* comparison : {"1v2", "2v3"}) {
      std::vector<std::size_t> idx;
      std::vector<double> raw;
      for (std::size_t i = 0; i < analyses.size(); ++i) {
        if (analyses[i].subset != subset || !analyses[i].fitted) continue;
        idx.push_back(i);
        raw.push_back(std::string_view(comparison) == "1v2" ? analyses[i].lrt_12.p
                                                            : analyses[i].lrt_23.p);
      }
      std::vector<double> adj = bh_adjust(raw);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const FeatureAnalysis& a = analyses[idx[k]];
        const LrtResult& r = std::string_view(comparison) == "1v2" ? a.lrt_12 : a.lrt_23;
        LrtRow row;
        row.feature = a.feature;
        row.subset = subset;
        row.comparison = comparison;
        row.stat = r.stat;
        row.df = r.df;
        row.p_raw = r.p;
        row.p_adj = adj[k];
        result.lrt_rows.push_back(std::move(row));
      }
    }
    // Unfittable features appear once per comparison with the reason.
    for (const FeatureAnalysis& a : analyses) {
      if (a.subset != subset || a.fitted) continue;
      for (const char* comparison : {"1v2", "2v3"}) {
        LrtRow row;
        row.feature = a.feature;
        row.subset = subset;
        row.comparison = comparison;
        row.note = "unavailable: " + a.failure;
        result.lrt_rows.push_back(std::move(row));
      }
    }
  }

  // Selected model per (feature, subset) from the adjusted LRT p values.
  std::map<std::pair<std::string, Subset>, std::pair<std::optional<double>, std::optional<double>>>
      adj_by_feature;
  for (const LrtRow& row : result.lrt_rows) {
    if (!row.p_adj) continue;
    auto& slot = adj_by_feature[{row.feature, row.subset}];
    (row.comparison == "1v2" ? slot.first : slot.second) = row.p_adj;
  }
  for (LrtRow& row : result.lrt_rows) {
    auto it = adj_by_feature.find({row.feature, row.subset});
    if (it == adj_by_feature.end()) continue;
    const auto& [p12, p23] = it->second;
    if (p12 && p23) row.selected_model = select_model(*p12, *p23);
  }

  // Coefficient rows; BH across the features sharing (subset, model, term).
  struct CoefKey {
    Subset subset;
    int model_id;
    std::string term;
    bool operator<(const CoefKey& o) const {
      if (subset != o.subset) return subset < o.subset;
      if (model_id != o.model_id) return model_id < o.model_id;
      return term < o.term;
    }
  };
  std::map<CoefKey, std::vector<std::size_t>> families;

  for (const FeatureAnalysis& a : analyses) {
    if (!a.fitted) continue;
    for (int m = 1; m <= 3; ++m) {
      const Design& d = a.designs[static_cast<std::size_t>(m - 1)];
      const LmmFit& fit = a.fits[static_cast<std::size_t>(m - 1)];
      std::vector<WaldTest> tests = wald_tests(fit);
      for (std::size_t j = 0; j < d.column_names.size(); ++j) {
        CoefficientRow row;
        row.feature = a.feature;
        row.subset = a.subset;
        row.model_id = m;
        row.term = d.column_names[j];
        row.estimate = fit.beta[static_cast<Eigen::Index>(j)];
        row.se = fit.se[static_cast<Eigen::Index>(j)];
        row.z = tests[j].z;
        row.p_raw = tests[j].defined ? tests[j].p : std::numeric_limits<double>::quiet_NaN();
        result.coefficients.push_back(std::move(row));
        families[{a.subset, m, d.column_names[j]}].push_back(result.coefficients.size() - 1);
      }
    }
  }
  for (const auto& [key, indices] : families) {
    std::vector<double> raw;
    std::vector<std::size_t> defined;
    for (std::size_t i : indices) {
      if (std::isnan(result.coefficients[i].p_raw)) continue;
      defined.push_back(i);
      raw.push_back(result.coefficients[i].p_raw);
    }
    std::vector<double> adj = bh_adjust(raw);
    for (std::size_t k = 0; k < defined.size(); ++k) {
      CoefficientRow& row = result.coefficients[defined[k]];
      row.p_adj = adj[k];
      row.stars = stars_for(adj[k]);
    }
  }

  return result;
}

void write_model_fits_csv(const AnalysisResult& result, const std::string& path) {
  CsvWriter w(path);
  w.header("feature,subset,model_id,term,estimate,se,z,p_raw,p_adj,stars");
  for (const CoefficientRow& r : result.coefficients) {
    w.field(r.feature)
        .field(subset_name(r.subset))
        .field(r.model_id)
        .field(r.term)
        .field(r.estimate)
        .field(r.se)
        .field(r.z)
        .field(r.p_raw)
        .field(r.p_adj)
        .field(r.stars);
    w.end_row();
  }
  w.close();
}

void write_lrt_csv(const AnalysisResult& result, const std::string& path) {
  CsvWriter w(path);
  w.header("feature,subset,comparison,stat,df,p_raw,p_adj,selected_model,note");
  for (const LrtRow& r : result.lrt_rows) {
    w.field(r.feature).field(subset_name(r.subset)).field(r.comparison);
    w.field(r.stat);
    if (r.df)
      w.field(*r.df);
    else
      w.field(std::string_view("NA"));
    w.field(r.p_raw).field(r.p_adj);
    if (r.selected_model)
      w.field(*r.selected_model);
    else
      w.field(std::string_view("NA"));
    w.field(r.note);
    w.end_row();
  }
  w.close();
}

std::vector<SeasonalProfileRow> seasonal_profile(const FeatureTable& table) {
  // Group row indices per participant (map: deterministic order).
  std::map<std::string, std::vector<std::size_t>> by_participant;
  for (std::size_t i = 0; i < table.size(); ++i)
    by_participant[table[i].participant_id].push_back(i);

  std::vector<SeasonalProfileRow> out;
  bool any_usable = false;

  for (int f = 0; f < kFeatureCount; ++f) {
    const FeatureId fid = static_cast<FeatureId>(f);
    const bool circular = feature_is_circular(fid);

    // month -> accumulated z values
    std::array<std::vector<double>, 13> monthly;

    for (const auto& [pid, indices] : by_participant) {
      std::vector<double> values;
      std::vector<int> months;
      for (std::size_t i : indices) {
        auto v = table[i].value(fid);
        if (!v) continue;
        values.push_back(*v);
        months.push_back(table[i].phq_completion.local_date().month);
      }
      if (values.size() < 2) continue;

      std::vector<double> deviations;
      if (circular) {
        auto mu = circular_mean_minutes(values);
        if (!mu) continue;
        deviations.reserve(values.size());
        for (double v : values) deviations.push_back(circular_delta_minutes(v, *mu));
      } else {
        deviations = values;
      }
      double mean = std::accumulate(deviations.begin(), deviations.end(), 0.0) /
                    static_cast<double>(deviations.size());
      double ss = 0;
      for (double v : deviations) ss += (v - mean) * (v - mean);
      double sd = std::sqrt(ss / static_cast<double>(deviations.size() - 1));
      if (!(sd > 0)) continue;  // zero variance: excluded from normalization

      any_usable = true;
      for (std::size_t k = 0; k < deviations.size(); ++k)
        monthly[static_cast<std::size_t>(months[k])].push_back((deviations[k] - mean) / sd);
    }

    for (int month = 1; month <= 12; ++month) {
      const auto& zs = monthly[static_cast<std::size_t>(month)];
      if (zs.empty()) continue;
      SeasonalProfileRow row;
      row.feature = std::string(feature_column(fid));
      row.month = month;
      row.n = static_cast<int>(zs.size());
      row.mean_z = std::accumulate(zs.begin(), zs.end(), 0.0) / static_cast<double>(zs.size());
      if (zs.size() >= 2) {
        double ss = 0;
        for (double z : zs) ss += (z - row.mean_z) * (z - row.mean_z);
        row.sd_z = std::sqrt(ss / static_cast<double>(zs.size() - 1));
      }
      out.push_back(std::move(row));
    }
  }

  if (!any_usable) throw StatsError("nothing to normalize");
  return out;
}

void write_seasonal_profile_csv(const std::vector<SeasonalProfileRow>& rows,
                                const std::string& path) {
  CsvWriter w(path);
  w.header("feature,month,mean_z,sd_z,n");
  for (const SeasonalProfileRow& r : rows) {
    w.field(r.feature).field(r.month).field(r.mean_z).field(r.sd_z).field(r.n);
    w.end_row();
  }
  w.close();
}

}  // namespace circadia
