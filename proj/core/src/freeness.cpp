#include "patmat/freeness.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "patmat/errors.hpp"
#include "patmat/integrator.hpp"
#include "patmat/parallel.hpp"
#include "patmat/pattern_io.hpp"
#include "patmat/seeding.hpp"

namespace patmat {
namespace {

template <class Mat>
Mat word_power(const Mat& x, const Word& w) {
  Mat p = w[0].starred ? Mat(x.adjoint()) : x;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Mat next(p.rows(), p.cols());
    if (w[k].starred) {
      next.noalias() = p * x.adjoint();
    } else {
      next.noalias() = p * x;
    }
    p = std::move(next);
  }
  return p;
}

template <class Mat>
double centered_trace(const std::vector<MatrixSample>& mats, const AlternatingSpec& spec,
                      std::span<const double> centers) {
  const auto n = static_cast<Eigen::Index>(mats.front().size);
  Mat acc;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    Mat y = word_power(std::get<Mat>(mats[k].entries), spec.factors[k].word);
    y.diagonal().array() -= centers[k];
    if (k == 0) {
      acc = std::move(y);
    } else if (k + 1 == mats.size()) {
      return std::real(acc.cwiseProduct(y.transpose()).sum()) / static_cast<double>(n);
    } else {
      Mat next(n, n);
      next.noalias() = acc * y;
      acc = std::move(next);
    }
  }
  return std::real(acc.trace()) / static_cast<double>(n);
}

Pattern spec_pattern(const nlohmann::json& j, const std::filesystem::path& base_dir, const std::string& where) {
  if (j.is_object()) return ingest(parse_pattern(j.dump()));
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (is_preset(s)) return to_index_space(preset(s));
    std::filesystem::path path(s);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return ingest(load_pattern_file(path));
  }
  throw ValidationError(where + ": pattern must be an object, a preset name or a file path");
}

}  // namespace

std::vector<std::string> check_spec(const AlternatingSpec& spec) {
  if (spec.factors.empty()) throw ValidationError("freeness spec needs at least one factor");
  if (spec.trials == 0) throw ValidationError("freeness spec needs at least one trial");
  std::vector<std::string> warnings;
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const AlternatingFactor& f = spec.factors[k];
    const std::string id = "factor " + std::to_string(k + 1);
    if (f.group != 1 && f.group != 2) throw ValidationError(id + ": group must be 1 or 2");
    if (f.word.letter_count() != 1) {
      throw ValidationError(id + ": word must use a single letter; every factor draws its own independent matrix");
    }
    if (f.pattern.space() != Space::index) throw ValidationError(id + ": pattern must be in index space");
    if (f.group == 2 && !f.pattern.is_full()) {
      warnings.push_back(id + ": group-2 pattern is not the full square; no vanishing is guaranteed");
    }
    if (!is_even_balanced(f.word)) {
      warnings.push_back(id + ": word '" + f.word.render() + "' is not even and star-balanced");
    }
    if (k > 0 && spec.factors[k - 1].group == f.group) {
      warnings.push_back(id + ": same group as the previous factor; product is not alternating");
    }
  }
  return warnings;
}

std::vector<double> resolve_centers(const AlternatingSpec& spec, const FreenessOptions& options) {
  std::vector<double> centers;
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const AlternatingFactor& f = spec.factors[k];
    if (f.center) {
      centers.push_back(*f.center);
      continue;
    }
    if (!spec.compute_centers) {
      throw ValidationError("factor " + std::to_string(k + 1) + " has no center and theory computation is disabled");
    }
    TheoryOptions theory;
    theory.threads = options.threads;
    const Pattern pats[] = {f.pattern};
    centers.push_back(theory_moment_mc(pats, f.word, spec.theory_samples, derive_seed(spec.seed, {k, 0xCE47ULL}),
                                       theory)
                          .value);
  }
  return centers;
}

MomentEstimate centered_moment(const AlternatingSpec& spec, std::size_t n, std::span<const double> centers,
                               const FreenessOptions& options) {
  check_spec(spec);
  if (n == 0) throw ValidationError("matrix size must be >= 1");
  if (centers.size() != spec.factors.size()) throw ValidationError("need one center per factor");
  std::vector<std::vector<std::uint8_t>> masks;
  for (const AlternatingFactor& f : spec.factors) masks.push_back(activation_mask(f.pattern, n, options.supersample));

  std::vector<double> values(spec.trials);
  parallel_for(spec.trials, options.threads, [&](std::size_t t) {
    std::vector<MatrixSample> mats;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      mats.push_back(sample_matrix(masks[k], n, spec.dist, derive_seed(spec.seed, {t, k})));
    }
    values[t] = is_real(spec.dist) ? centered_trace<RealMatrix>(mats, spec, centers)
                                   : centered_trace<ComplexMatrix>(mats, spec, centers);
  });
  MomentEstimate e = summarize(values, Method::empirical);
  if (!std::isfinite(e.value)) throw NumericalError("centered moment is not finite");
  return e;
}

MomentEstimate centered_moment(const AlternatingSpec& spec, std::size_t n, const FreenessOptions& options) {
  const auto centers = resolve_centers(spec, options);
  return centered_moment(spec, n, centers, options);
}

std::vector<SweepRow> freeness_sweep(const AlternatingSpec& spec, const FreenessOptions& options) {
  check_spec(spec);
  if (spec.sizes.empty()) throw ValidationError("freeness sweep needs at least one size");
  const auto centers = resolve_centers(spec, options);
  std::vector<SweepRow> rows;
  for (std::size_t n : spec.sizes) rows.push_back({n, centered_moment(spec, n, centers, options)});
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "N,estimate,stderr\n";
  for (const SweepRow& r : rows) out << r.size << ',' << r.estimate.value << ',' << r.estimate.std_error << '\n';
  return out.str();
}

AlternatingSpec parse_alternating_spec(std::string_view text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("freeness spec: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("factors") || !doc["factors"].is_array()) {
    throw ValidationError("freeness spec needs a \"factors\" array");
  }
  AlternatingSpec spec;
  try {
    for (std::size_t k = 0; k < doc["factors"].size(); ++k) {
      const json& f = doc["factors"][k];
      const std::string where = "factors/" + std::to_string(k);
      if (!f.is_object() || !f.contains("pattern") || !f.contains("word")) {
        throw ValidationError(where + ": needs \"pattern\" and \"word\"");
      }
      AlternatingFactor factor{f.value("group", 1), spec_pattern(f["pattern"], base_dir, where),
                               Word::parse(f["word"].get<std::string>()), std::nullopt};
      if (f.contains("center") && !f["center"].is_null()) factor.center = f["center"].get<double>();
      spec.factors.push_back(std::move(factor));
    }
    if (doc.contains("sizes")) spec.sizes = doc["sizes"].get<std::vector<std::size_t>>();
    spec.trials = doc.value("trials", spec.trials);
    if (doc.contains("dist")) spec.dist = parse_entry_dist(doc["dist"].get<std::string>());
    spec.seed = doc.value("seed", spec.seed);
    spec.compute_centers = doc.value("compute_centers", spec.compute_centers);
    spec.theory_samples = doc.value("theory_samples", spec.theory_samples);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("freeness spec: ") + e.what());
  }
  return spec;
}

}  // namespace patmat
