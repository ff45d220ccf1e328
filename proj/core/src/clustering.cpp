#include "depcon/clustering.hpp"

#include "depcon/error.hpp"
#include "depcon/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>

namespace depcon::cluster {

namespace {

using Labels = std::vector<int>;

void check_gram(const Eigen::MatrixXd& gram) {
    if (gram.rows() != gram.cols()) {
        throw Error(ErrorKind::NotSquare,
                    "Gram matrix is " + std::to_string(gram.rows()) + " x " + std::to_string(gram.cols()));
    }
    if (!gram.allFinite()) {
        throw Error(ErrorKind::NonFiniteValue, "Gram matrix has non-finite entries");
    }
    const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw Error(ErrorKind::InvalidFormat, "Gram matrix is not symmetric");
    }
}

// Relabels arbitrary ids to 0..k-1 in order of first appearance.
std::vector<int> compact_labels(std::span<const int> labels, std::size_t& k) {
    std::map<int, int> ids;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        const auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    k = ids.size();
    return out;
}

// Per-cluster kernel sums for a fixed assignment.
struct ClusterStats {
    Eigen::MatrixXd row_sums; // (i, c): sum of K(i, j) over j in c
    Eigen::VectorXd pair_sums; // c: sum of K(j, l) over j, l in c
    std::vector<std::size_t> sizes;

    double distance(const Eigen::MatrixXd& gram, Eigen::Index i, std::size_t c) const {
        const double size = static_cast<double>(sizes[c]);
        const auto cc = static_cast<Eigen::Index>(c);
        return gram(i, i) - 2.0 * row_sums(i, cc) / size + pair_sums(cc) / (size * size);
    }
};

ClusterStats cluster_stats(const Eigen::MatrixXd& gram, const Labels& labels, std::size_t k, std::size_t threads) {
    const Eigen::Index n = gram.rows();
    ClusterStats s{Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(k)), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)),
                   std::vector<std::size_t>(k, 0)};
    parallel_for_blocks(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
        for (auto i = static_cast<Eigen::Index>(begin); i < static_cast<Eigen::Index>(end); ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                s.row_sums(i, labels[static_cast<std::size_t>(j)]) += gram(i, j);
            }
        }
    });
    std::vector<CompensatedSum> totals(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
        ++s.sizes[c];
        totals[c].add(s.row_sums(i, static_cast<Eigen::Index>(c)));
    }
    for (std::size_t c = 0; c < k; ++c) {
        s.pair_sums(static_cast<Eigen::Index>(c)) = totals[c].value();
    }
    return s;
}

double objective_of(const Eigen::MatrixXd& gram, const ClusterStats& s) {
    CompensatedSum total;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        total.add(gram(i, i));
    }
    for (std::size_t c = 0; c < s.sizes.size(); ++c) {
        if (s.sizes[c] > 0) {
            total.add(-s.pair_sums(static_cast<Eigen::Index>(c)) / static_cast<double>(s.sizes[c]));
        }
    }
    return std::max(0.0, total.value());
}

// Moves the sample farthest from its own center into each empty cluster.
template <typename DistanceFn>
void reseed_empty(Labels& labels, std::size_t k, DistanceFn&& distance) {
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    std::vector<bool> moved(labels.size(), false);
    for (std::size_t e = 0; e < k; ++e) {
        if (sizes[e] != 0) {
            continue;
        }
        std::size_t best = labels.size();
        double best_distance = -1.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            if (moved[i] || sizes[c] < 2) {
                continue;
            }
            const double d = distance(i, c);
            if (d > best_distance) {
                best_distance = d;
                best = i;
            }
        }
        if (best == labels.size()) {
            throw Error(ErrorKind::EmptyClusterUnrecoverable, "no sample available to reseed cluster " + std::to_string(e));
        }
        --sizes[static_cast<std::size_t>(labels[best])];
        labels[best] = static_cast<int>(e);
        sizes[e] = 1;
        moved[best] = true;
    }
}

ClusterAssignment run_from_labels(const Eigen::MatrixXd& gram, Labels labels, std::size_t k, std::size_t max_iter,
                                  std::size_t threads) {
    ClusterAssignment out;
    out.k = k;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0;; ++iter) {
        const ClusterStats stats = cluster_stats(gram, labels, k, threads);
        const double objective = objective_of(gram, stats);
        if (objective > previous + 1e-9 * (std::abs(previous) + 1.0)) {
            // Exact arithmetic cannot get here; stop on the last nonincreasing state.
            out.converged = true;
            break;
        }
        out.labels = labels;
        out.objective = objective;
        out.objective_trace.push_back(objective);
        previous = objective;
        if (iter == max_iter) {
            break;
        }
        Labels next(labels.size());
        parallel_for_blocks(labels.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                double best = std::numeric_limits<double>::infinity();
                int best_c = 0;
                for (std::size_t c = 0; c < k; ++c) {
                    if (stats.sizes[c] == 0) {
                        continue;
                    }
                    const double d = stats.distance(gram, static_cast<Eigen::Index>(i), c);
                    if (d < best) {
                        best = d;
                        best_c = static_cast<int>(c);
                    }
                }
                next[i] = best_c;
            }
        });
        reseed_empty(next, k, [&](std::size_t i, std::size_t c) {
            return stats.sizes[c] == 0 ? 0.0 : stats.distance(gram, static_cast<Eigen::Index>(i), c);
        });
        if (next == labels) {
            out.converged = true;
            break;
        }
        labels = std::move(next);
        ++out.iterations;
    }
    return out;
}

double point_distance(const Eigen::MatrixXd& gram, Eigen::Index i, Eigen::Index j) {
    return gram(i, i) - 2.0 * gram(i, j) + gram(j, j);
}

Labels assign_to_seeds(const Eigen::MatrixXd& gram, std::span<const std::size_t> seeds) {
    Labels labels(static_cast<std::size_t>(gram.rows()));
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < seeds.size(); ++c) {
            const double d = point_distance(gram, i, static_cast<Eigen::Index>(seeds[c]));
            if (d < best) {
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best_c;
    }
    reseed_empty(labels, seeds.size(), [&](std::size_t i, std::size_t c) {
        return point_distance(gram, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(seeds[c]));
    });
    return labels;
}

std::vector<std::size_t> choose_seeds(const Eigen::MatrixXd& gram, std::size_t k, Init init, std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(gram.rows());
    std::vector<std::size_t> seeds;
    seeds.reserve(k);
    if (init == Init::Random) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        for (std::size_t c = 0; c < k; ++c) {
            std::uniform_int_distribution<std::size_t> pick(c, n - 1);
            std::swap(order[c], order[pick(rng)]);
            seeds.push_back(order[c]);
        }
        return seeds;
    }
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    seeds.push_back(first(rng));
    std::vector<double> d2(n);
    std::vector<bool> chosen(n, false);
    chosen[seeds[0]] = true;
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::max(0.0, point_distance(gram, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(seeds[0])));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (seeds.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += chosen[i] ? 0.0 : d2[i];
        }
        std::size_t next = n;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || d2[i] <= 0.0) {
                    continue;
                }
                acc += d2[i];
                next = i;
                if (acc > target) {
                    break;
                }
            }
        }
        if (next == n) {
            // Every remaining sample coincides with a seed in feature space.
            for (std::size_t i = 0; i < n && next == n; ++i) {
                if (!chosen[i]) {
                    next = i;
                }
            }
        }
        seeds.push_back(next);
        chosen[next] = true;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], std::max(0.0, point_distance(gram, static_cast<Eigen::Index>(i),
                                                                  static_cast<Eigen::Index>(next))));
        }
    }
    return seeds;
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 2) {
        throw Error(ErrorKind::OutOfRange, "k must be at least 2");
    }
    if (k > n) {
        throw Error(ErrorKind::KTooLarge, "k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    }
}

// Shared validation for the label-based criteria; returns compact labels.
Labels checked_labels(std::size_t n, std::span<const int> labels, std::size_t& k, bool require_k_below_n) {
    if (labels.size() != n) {
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(labels.size()) + " labels for " + std::to_string(n) + " samples");
    }
    Labels compact = compact_labels(labels, k);
    if (k < 2 || (require_k_below_n && k >= n)) {
        throw Error(ErrorKind::DegenerateLabels, std::to_string(k) + " clusters over " + std::to_string(n) + " samples");
    }
    return compact;
}

template <typename DistanceFn>
double mean_silhouette(std::size_t n, const Labels& labels, std::size_t k, DistanceFn&& distance) {
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    CompensatedSum total;
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        if (sizes[own] < 2) {
            continue; // contributes 0
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sums[static_cast<std::size_t>(labels[j])] += distance(i, j);
            }
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own && sizes[c] > 0) {
                b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
            }
        }
        const double denom = std::max(a, b);
        total.add(denom > 0.0 ? (b - a) / denom : 0.0);
    }
    return total.value() / static_cast<double>(n);
}

} // namespace

std::string_view to_string(Init init) noexcept { return init == Init::Random ? "random" : "plusplus"; }

Init parse_init(std::string_view text) {
    if (text == "random") return Init::Random;
    if (text == "plusplus" || text == "k-means++") return Init::PlusPlus;
    throw Error(ErrorKind::OutOfRange, "unknown init '" + std::string(text) + "'");
}

std::string_view to_string(Criterion criterion) noexcept {
    return criterion == Criterion::Vrc ? "vrc" : "silhouette";
}

Criterion parse_criterion(std::string_view text) {
    if (text == "vrc") return Criterion::Vrc;
    if (text == "silhouette") return Criterion::Silhouette;
    throw Error(ErrorKind::OutOfRange, "unknown criterion '" + std::string(text) + "'");
}

ClusterAssignment kernel_kmeans(const Eigen::MatrixXd& gram, std::size_t k, const KMeansOptions& options) {
    check_gram(gram);
    const auto n = static_cast<std::size_t>(gram.rows());
    check_k(k, n);
    const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
    std::vector<ClusterAssignment> runs(restarts);
    const std::size_t threads = resolve_threads(options.threads);
    const std::size_t inner_threads = restarts > 1 ? 1 : threads;
    parallel_for_blocks(restarts, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            std::mt19937_64 rng(derive_seed(options.seed, r));
            const auto seeds = choose_seeds(gram, k, options.init, rng);
            runs[r] = run_from_labels(gram, assign_to_seeds(gram, seeds), k, options.max_iter, inner_threads);
            runs[r].restart = r;
        }
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (runs[r].objective < runs[best].objective) {
            best = r;
        }
    }
    return std::move(runs[best]);
}

ClusterAssignment kernel_kmeans_from_seeds(const Eigen::MatrixXd& gram, std::span<const std::size_t> seeds,
                                           std::size_t max_iter, std::size_t threads) {
    check_gram(gram);
    const auto n = static_cast<std::size_t>(gram.rows());
    check_k(seeds.size(), n);
    for (std::size_t s : seeds) {
        if (s >= n) {
            throw Error(ErrorKind::IndexOutOfBounds, "seed sample " + std::to_string(s) + " out of range");
        }
    }
    return run_from_labels(gram, assign_to_seeds(gram, seeds), seeds.size(), max_iter, threads);
}

double variance_ratio_criterion(const Eigen::MatrixXd& gram, std::span<const int> labels) {
    check_gram(gram);
    const auto n = static_cast<std::size_t>(gram.rows());
    std::size_t k = 0;
    const Labels compact = checked_labels(n, labels, k, true);
    const ClusterStats stats = cluster_stats(gram, compact, k, 1);
    CompensatedSum trace;
    CompensatedSum everything;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        trace.add(gram(i, i));
        for (Eigen::Index j = 0; j < gram.cols(); ++j) {
            everything.add(gram(i, j));
        }
    }
    const double total = trace.value() - everything.value() / static_cast<double>(n);
    const double within = objective_of(gram, stats);
    const double between = total - within;
    if (within <= 1e-12 * std::max(1.0, std::abs(trace.value()))) {
        return std::numeric_limits<double>::infinity();
    }
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

double silhouette_score(const Eigen::MatrixXd& gram, std::span<const int> labels) {
    check_gram(gram);
    const auto n = static_cast<std::size_t>(gram.rows());
    std::size_t k = 0;
    const Labels compact = checked_labels(n, labels, k, false);
    const Eigen::VectorXd diag = gram.diagonal();
    return mean_silhouette(n, compact, k, [&](std::size_t i, std::size_t j) {
        const auto a = static_cast<Eigen::Index>(i);
        const auto b = static_cast<Eigen::Index>(j);
        if (!(diag(a) > 0.0 && diag(b) > 0.0)) {
            return std::numbers::pi / 2.0;
        }
        const double cosine = gram(a, b) / std::sqrt(diag(a) * diag(b));
        return std::acos(std::clamp(cosine, -1.0, 1.0));
    });
}

double silhouette_euclidean(const Eigen::MatrixXd& points, std::span<const int> labels) {
    const auto n = static_cast<std::size_t>(points.rows());
    std::size_t k = 0;
    const Labels compact = checked_labels(n, labels, k, false);
    return mean_silhouette(n, compact, k, [&](std::size_t i, std::size_t j) {
        return (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).norm();
    });
}

KSelection select_k(const Eigen::MatrixXd& gram, std::size_t k_min, std::size_t k_max, Criterion criterion,
                    const KMeansOptions& options) {
    check_gram(gram);
    const auto n = static_cast<std::size_t>(gram.rows());
    if (k_min < 2 || k_max < k_min) {
        throw Error(ErrorKind::OutOfRange, "k range must satisfy 2 <= k_min <= k_max");
    }
    if (k_max + 1 > n) {
        throw Error(ErrorKind::KTooLarge, "k range must end at or below n - 1");
    }
    KSelection out;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min; k <= k_max; ++k) {
        KMeansOptions per_k = options;
        per_k.seed = derive_seed(options.seed, k);
        ClusterAssignment assignment = kernel_kmeans(gram, k, per_k);
        std::size_t distinct = 0;
        compact_labels(assignment.labels, distinct);
        double score = -std::numeric_limits<double>::infinity();
        if (distinct >= 2 && distinct < n) {
            score = criterion == Criterion::Vrc ? variance_ratio_criterion(gram, assignment.labels)
                                                : silhouette_score(gram, assignment.labels);
        }
        out.scores.push_back({k, score, assignment.objective});
        if (out.best_k == 0 || score > best_score) {
            best_score = score;
            out.best_k = k;
            out.best = std::move(assignment);
        }
    }
    return out;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::LengthMismatch,
                    "label vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    std::size_t ka = 0;
    std::size_t kb = 0;
    const Labels ca = compact_labels(a, ka);
    const Labels cb = compact_labels(b, kb);
    std::vector<double> table(ka * kb, 0.0);
    std::vector<double> rows(ka, 0.0);
    std::vector<double> cols(kb, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        table[static_cast<std::size_t>(ca[i]) * kb + static_cast<std::size_t>(cb[i])] += 1.0;
        rows[static_cast<std::size_t>(ca[i])] += 1.0;
        cols[static_cast<std::size_t>(cb[i])] += 1.0;
    }
    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double index = 0.0;
    for (double v : table) {
        index += pairs(v);
    }
    double sum_a = 0.0;
    for (double v : rows) {
        sum_a += pairs(v);
    }
    double sum_b = 0.0;
    for (double v : cols) {
        sum_b += pairs(v);
    }
    const double total = pairs(static_cast<double>(a.size()));
    const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) {
        // Both partitions trivial in the same way (e.g. one cluster each).
        return 1.0;
    }
    return (index - expected) / (maximum - expected);
}

Eigen::MatrixXd linear_gram(const Eigen::MatrixXd& x) { return x * x.transpose(); }

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        out.col(j).array() -= mean;
        const double sd = std::sqrt(out.col(j).squaredNorm() / static_cast<double>(x.rows()));
        if (sd > 0.0) {
            out.col(j) /= sd;
        }
    }
    return out;
}

} // namespace depcon::cluster
