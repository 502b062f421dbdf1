#include "superlin/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "superlin/contrast.hpp"
#include "superlin/errors.hpp"
#include "superlin/io.hpp"
#include "superlin/version.hpp"
#include "json_writer.hpp"

namespace superlin {
namespace {

// exp(log_value) overflows a double past this point; the JSON report then
// carries value = null alongside the finite log_value.
const double kMaxLog = std::log(std::numeric_limits<double>::max());

constexpr double kInvSqrt2Pi = 0.39894228040143268;

bool value_overflows(const EvidentialResult& v) {
  return !v.unbounded && v.log_value > kMaxLog;
}

std::string_view ordering_kind_name(OrderingKind kind) {
  switch (kind) {
    case OrderingKind::AsReported: return "as-reported";
    case OrderingKind::IncreasingMeans: return "increasing-means";
    case OrderingKind::Exclude: return "exclude";
  }
  return "unknown";
}

std::string fmt4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

void write_evidential(detail::JsonWriter& w, const EvidentialResult& v) {
  w.begin_object();
  w.key("method");
  w.string(to_string(v.method));
  w.key("value");
  if (v.unbounded || value_overflows(v)) {
    w.null();
  } else {
    w.number(v.value());
  }
  w.key("log_value");
  if (v.unbounded) {
    w.null();
  } else {
    w.number(v.log_value);
  }
  w.key("a_star");
  w.number(v.a_star);
  w.key("at_bound");
  w.boolean(v.at_bound);
  w.key("unbounded");
  w.boolean(v.unbounded);
  w.end_object();
}

void write_test(detail::JsonWriter& w, const TestResult& t) {
  w.begin_object();
  w.key("method");
  w.string(to_string(t.method));
  w.key("statistic");
  if (std::isfinite(t.statistic)) {
    w.number(t.statistic);
  } else {
    w.null();
  }
  w.key("df");
  if (t.df2 > 0.0) {
    const double df[2] = {t.df1, t.df2};
    w.numbers_inline(df);
  } else {
    const double df[1] = {t.df1};
    w.numbers_inline(df);
  }
  w.key("tail");
  w.string(to_string(t.tail));
  w.key("p_value");
  w.number(t.p_value);
  w.key("degenerate");
  w.boolean(t.degenerate);
  w.end_object();
}

std::vector<std::string_view> selected_test_names(const TestSelection& tests) {
  std::vector<std::string_view> names;
  if (tests.chi2) names.push_back("chi2");
  if (tests.delta_f) names.push_back("delta_f");
  if (tests.v_hat) names.push_back("v_hat");
  if (tests.product) names.push_back("product");
  if (tests.joint) names.push_back("joint");
  return names;
}

// --- human-readable helpers -------------------------------------------------

void append_evidential_line(std::string& out, std::string_view indent,
                            const EvidentialResult& v,
                            std::string_view symbol) {
  out += indent;
  out += to_string(v.method);
  out += ": ";
  if (v.unbounded) {
    out += "unbounded (z̃ = 0)\n";
    return;
  }
  out += symbol;
  out += " ≈ ";
  if (value_overflows(v)) {
    out += "exp(" + fmt4(v.log_value) + ")";
  } else {
    out += fmt4(v.value());
  }
  out += " (a* ≈ " + fmt4(v.a_star);
  if (v.at_bound) out += ", at bound";
  out += ")\n";
}

void append_test_line(std::string& out, std::string_view indent,
                      const TestResult& t, std::string_view symbol) {
  out += indent;
  out += to_string(t.method);
  out += ": ";
  out += symbol;
  if (std::isfinite(t.statistic)) {
    out += " ≈ " + fmt4(t.statistic);
  } else {
    out += " = ∞";
  }
  out += ", df = (" + fmt4(t.df1);
  if (t.df2 > 0.0) out += ", " + fmt4(t.df2);
  out += "), p ≈ " + fmt4(t.p_value);
  out += " (";
  out += to_string(t.tail);
  out += " tail)";
  if (t.degenerate) out += ", degenerate";
  out += '\n';
}

std::string triple_text(const std::array<double, 3>& v) {
  return "[" + fmt4(v[0]) + ", " + fmt4(v[1]) + ", " + fmt4(v[2]) + "]";
}

}  // namespace

AnalysisReport analyze(const std::vector<ArticleDataset>& datasets,
                       const AnalysisConfig& config) {
  if (std::isnan(config.alpha) || config.alpha <= 0.0 || config.alpha >= 1.0) {
    throw ValidationError("analyze: alpha must be in (0, 1)");
  }
  validate_datasets(datasets);

  AnalysisReport report;
  report.toolkit_name = std::string(kToolkitName);
  report.toolkit_version = std::string(kToolkitVersion);
  report.config = config;
  report.articles.reserve(datasets.size());

  // The dataset's own policy applies first (programmatic callers may carry
  // one per article), then the analysis-wide policy from the config.
  std::vector<ArticleDataset> staged;
  staged.reserve(datasets.size());
  for (const ArticleDataset& dataset : datasets) {
    staged.push_back(apply_ordering(dataset, dataset.ordering_policy));
  }
  if (config.order.kind == OrderingKind::Exclude) {
    // A config-level exclusion is interpreted across the whole input: an id
    // must match somewhere, but need not appear in every article.
    for (const std::string& id : config.order.excluded_ids) {
      bool found = false;
      for (const ArticleDataset& a : staged) {
        for (const ExperimentSummary& e : a.experiments) {
          if (e.id == id) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        throw ValidationError("unknown excluded experiment id '" + id + "'");
      }
    }
    for (ArticleDataset& a : staged) {
      OrderingPolicy per_article;
      per_article.kind = OrderingKind::Exclude;
      for (const std::string& id : config.order.excluded_ids) {
        for (const ExperimentSummary& e : a.experiments) {
          if (e.id == id) {
            per_article.excluded_ids.push_back(id);
            break;
          }
        }
      }
      a = apply_ordering(a, per_article);
    }
  } else {
    for (ArticleDataset& a : staged) {
      a = apply_ordering(a, config.order);
    }
  }

  for (const ArticleDataset& ordered : staged) {
    if (ordered.experiments.empty()) {
      throw ValidationError("article '" + ordered.id +
                            "': all experiments excluded");
    }

    ArticleReport article;
    article.id = ordered.id;
    std::vector<double> z_tildes;
    z_tildes.reserve(ordered.experiments.size());
    for (const ExperimentSummary& e : ordered.experiments) {
      ExperimentRow row;
      row.summary = e;
      const NormalizedDeviation nd = normalized_deviation(e);
      row.z = nd.z;
      row.sigma0 = nd.sigma0;
      row.z_tilde = nd.z_tilde;
      z_tildes.push_back(nd.z_tilde);
      if (config.tests.v_hat) {
        row.v_hat = v_hat_single(nd.z_tilde);
        row.v_numeric = v_single_numeric(e, config.search);
      }
      if (config.tests.delta_f) {
        row.delta_f = delta_f_single(e);
      }
      article.experiments.push_back(std::move(row));
    }
    if (config.tests.chi2) {
      article.chi2 = chi2_linearity_test(z_tildes);
    }
    if (config.tests.delta_f) {
      article.delta_f_fisher = delta_f_article(ordered);
    }
    if (config.tests.product) {
      article.v_product = v_product(z_tildes);
    }
    if (config.tests.joint) {
      article.v_hat_joint = v_hat_joint(z_tildes);
      article.v_joint_numeric = v_joint_numeric(ordered, config.search);
    }

    // Flags, in a fixed order: per-experiment singularities first (input
    // order), then the article-level ones.
    const bool any_evidential =
        config.tests.v_hat || config.tests.product || config.tests.joint;
    for (const ExperimentRow& row : article.experiments) {
      if (any_evidential && row.z_tilde == 0.0) {
        article.flags.push_back("experiment '" + row.summary.id +
                                "': z~ = 0 (evidential value unbounded)");
      }
      if (row.delta_f && row.delta_f->degenerate) {
        article.flags.push_back("experiment '" + row.summary.id +
                                "': dF = 0 (perfectly linear means)");
      }
    }
    if (article.chi2 && article.chi2->degenerate) {
      article.flags.push_back("chi2-article: T = 0 (all deviations vanish)");
    }
    if (article.delta_f_fisher && article.delta_f_fisher->degenerate) {
      article.flags.push_back("deltaF-fisher-article: p = 0 (log singularity)");
    }
    if (article.v_product && article.v_product->unbounded) {
      article.flags.push_back("product: unbounded (z~ = 0)");
    }
    if (article.v_hat_joint && article.v_hat_joint->unbounded) {
      article.flags.push_back("closed-joint: unbounded (all z~ = 0)");
    }
    if (article.v_joint_numeric && article.v_joint_numeric->unbounded) {
      article.flags.push_back("numeric-joint: unbounded (all z~ = 0)");
    }
    report.articles.push_back(std::move(article));
  }
  return report;
}

std::string report_json(const AnalysisReport& report) {
  detail::JsonWriter w;
  w.begin_object();

  w.key("toolkit");
  w.begin_object();
  w.key("name");
  w.string(report.toolkit_name);
  w.key("version");
  w.string(report.toolkit_version);
  w.end_object();

  w.key("config");
  w.begin_object();
  w.key("order");
  w.string(ordering_kind_name(report.config.order.kind));
  w.key("excluded_ids");
  w.begin_array();
  for (const std::string& id : report.config.order.excluded_ids) {
    w.string(id);
  }
  w.end_array();
  w.key("tests");
  w.begin_array();
  for (std::string_view name : selected_test_names(report.config.tests)) {
    w.string(name);
  }
  w.end_array();
  w.key("alpha");
  w.number(report.config.alpha);
  w.key("seed");
  w.integer(static_cast<long long>(report.config.seed));
  w.key("search");
  w.begin_object();
  w.key("lattice_step");
  w.number(report.config.search.lattice_step);
  w.key("step_tol");
  w.number(report.config.search.step_tol);
  w.key("eval_budget");
  w.integer(report.config.search.eval_budget);
  w.end_object();
  w.key("input");
  w.begin_object();
  w.key("path");
  w.string(report.config.input_path);
  w.key("format");
  w.string(report.config.input_format);
  w.key("digest");
  w.string(report.config.input_digest);
  w.end_object();
  w.end_object();

  w.key("articles");
  w.begin_array();
  for (const ArticleReport& article : report.articles) {
    w.begin_object();
    w.key("id");
    w.string(article.id);
    w.key("experiments");
    w.begin_array();
    for (const ExperimentRow& row : article.experiments) {
      w.begin_object();
      w.key("id");
      w.string(row.summary.id);
      w.key("n");
      w.integers_inline(row.summary.cell_sizes);
      w.key("means");
      w.numbers_inline(row.summary.means);
      w.key("sds");
      w.numbers_inline(row.summary.sds);
      w.key("z");
      w.number(row.z);
      w.key("sigma0");
      w.number(row.sigma0);
      w.key("z_tilde");
      w.number(row.z_tilde);
      if (row.v_hat) {
        w.key("v_hat");
        write_evidential(w, *row.v_hat);
      }
      if (row.v_numeric) {
        w.key("v_numeric");
        write_evidential(w, *row.v_numeric);
      }
      if (row.delta_f) {
        w.key("delta_f");
        write_test(w, *row.delta_f);
      }
      w.end_object();
    }
    w.end_array();
    if (article.chi2) {
      w.key("chi2");
      write_test(w, *article.chi2);
    }
    if (article.delta_f_fisher) {
      w.key("delta_f_fisher");
      write_test(w, *article.delta_f_fisher);
    }
    if (article.v_product) {
      w.key("v_product");
      write_evidential(w, *article.v_product);
    }
    if (article.v_hat_joint) {
      w.key("v_hat_joint");
      write_evidential(w, *article.v_hat_joint);
    }
    if (article.v_joint_numeric) {
      w.key("v_joint_numeric");
      write_evidential(w, *article.v_joint_numeric);
    }
    w.key("flags");
    w.begin_array();
    for (const std::string& flag : article.flags) {
      w.string(flag);
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();

  w.end_object();
  return w.take();
}

std::string report_text(const AnalysisReport& report) {
  std::string out;
  out += report.toolkit_name + " " + report.toolkit_version + "\n";
  const auto or_dash = [](const std::string& s) {
    return s.empty() ? std::string("-") : s;
  };
  out += "input: " + or_dash(report.config.input_path) + " (" +
         or_dash(report.config.input_format) + ", " +
         or_dash(report.config.input_digest) + ")\n";
  out += "config: order = ";
  out += ordering_kind_name(report.config.order.kind);
  if (report.config.order.kind == OrderingKind::Exclude) {
    out += " [";
    for (std::size_t i = 0; i < report.config.order.excluded_ids.size(); ++i) {
      if (i > 0) out += ", ";
      out += report.config.order.excluded_ids[i];
    }
    out += "]";
  }
  out += ", alpha ≈ " + fmt4(report.config.alpha);
  out += ", seed = " + std::to_string(report.config.seed);
  out += "\ntests:";
  for (std::string_view name : selected_test_names(report.config.tests)) {
    out += ' ';
    out += name;
  }
  out += '\n';

  for (const ArticleReport& article : report.articles) {
    out += "\narticle '" + article.id +
           "' — experiments: " + std::to_string(article.experiments.size()) +
           "\n";
    for (const ExperimentRow& row : article.experiments) {
      out += "  experiment '" + row.summary.id + "': n = [";
      for (int i = 0; i < 3; ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(row.summary.cell_sizes[static_cast<std::size_t>(i)]);
      }
      out += "], means = " + triple_text(row.summary.means);
      out += ", sds = " + triple_text(row.summary.sds) + "\n";
      out += "    z ≈ " + fmt4(row.z) + ", σ0 ≈ " + fmt4(row.sigma0) +
             ", z̃ ≈ " + fmt4(row.z_tilde) + "\n";
      if (row.v_hat) append_evidential_line(out, "    ", *row.v_hat, "V̂");
      if (row.v_numeric) {
        append_evidential_line(out, "    ", *row.v_numeric, "V");
      }
      if (row.delta_f) append_test_line(out, "    ", *row.delta_f, "F");
    }
    if (article.chi2) append_test_line(out, "  ", *article.chi2, "T");
    if (article.delta_f_fisher) {
      append_test_line(out, "  ", *article.delta_f_fisher, "X");
    }
    if (article.v_product) {
      append_evidential_line(out, "  ", *article.v_product, "V̂");
    }
    if (article.v_hat_joint) {
      append_evidential_line(out, "  ", *article.v_hat_joint, "V̂");
    }
    if (article.v_joint_numeric) {
      append_evidential_line(out, "  ", *article.v_joint_numeric, "V");
    }
    if (article.flags.empty()) {
      out += "  flags: (none)\n";
    } else {
      out += "  flags:\n";
      for (const std::string& flag : article.flags) {
        out += "    - " + flag + "\n";
      }
    }
  }
  return out;
}

std::string figure_data_tsv(const ArticleReport& article) {
  std::string out = "series\tx\ty\n";
  double sum_sq = 0.0;
  for (const ExperimentRow& row : article.experiments) {
    out += "rug\t" + format_g17(row.z_tilde) + "\t0\n";
    sum_sq += row.z_tilde * row.z_tilde;
  }
  const double m =
      sum_sq / static_cast<double>(article.experiments.size());
  for (int i = 0; i <= 800; ++i) {
    const double x = static_cast<double>(i - 400) / 100.0;
    const double y = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    out += "h0-density\t" + format_g17(x) + "\t" + format_g17(y) + "\n";
  }
  if (m > 0.0) {
    const double s = std::sqrt(m);
    for (int i = 0; i <= 800; ++i) {
      const double x = static_cast<double>(i - 400) / 100.0;
      const double y = kInvSqrt2Pi / s * std::exp(-0.5 * (x / s) * (x / s));
      out += "fitted-density\t" + format_g17(x) + "\t" + format_g17(y) + "\n";
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

}  // namespace superlin
