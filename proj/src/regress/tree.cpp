#include "vaxcast/regress/tree.hpp"

#include <algorithm>
#include <numeric>

#include "vaxcast/error.hpp"

namespace vaxcast::regress {

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& node = nodes[i];
        i = static_cast<std::size_t>(row(node.feature) <= node.threshold ? node.left : node.right);
    }
    return nodes[i].value;
}

std::size_t RegressionTree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {  // children always follow their parent
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

namespace {

class Builder {
public:
    Builder(const Eigen::MatrixXd& x, std::span<const double> y, const TreeParams& params, Rng* rng)
        : x_(x), y_(y), params_(params), rng_(rng), all_features_(static_cast<std::size_t>(x.cols())) {
        std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
    }

    RegressionTree build(std::vector<std::size_t> sample) {
        grow(std::move(sample), 0);
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double score = 0.0;
    };

    int grow(std::vector<std::size_t> idx, int depth) {
        const std::size_t n = idx.size();
        double sum = 0.0, lo = y_[idx[0]], hi = y_[idx[0]];
        for (std::size_t i : idx) {
            sum += y_[i];
            lo = std::min(lo, y_[i]);
            hi = std::max(hi, y_[i]);
        }
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back({});
        tree_.nodes.back().value = std::clamp(sum / static_cast<double>(n), lo, hi);

        const bool depth_left = params_.max_depth <= 0 || depth < params_.max_depth;
        if (!depth_left || n < 2 * params_.min_leaf || lo == hi) return id;

        const Split split = best_split(idx, sum * sum / static_cast<double>(n));
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            (x_(static_cast<Eigen::Index>(i), split.feature) <= split.threshold ? left : right).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    std::vector<std::size_t> candidate_features() {
        const std::size_t k = all_features_.size();
        if (params_.mtry == 0 || params_.mtry >= k) return all_features_;
        std::vector<std::size_t> pool = all_features_;
        for (std::size_t i = 0; i < params_.mtry; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_->below(k - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(params_.mtry);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    Split best_split(const std::vector<std::size_t>& idx, double parent_score) {
        const std::size_t n = idx.size();
        Split best;
        best.score = parent_score;
        std::vector<std::size_t> order(idx);
        for (std::size_t f : candidate_features()) {
            const auto col = static_cast<Eigen::Index>(f);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double xa = x_(static_cast<Eigen::Index>(a), col), xb = x_(static_cast<Eigen::Index>(b), col);
                return xa < xb || (xa == xb && a < b);
            });
            double total = 0.0;
            for (std::size_t i : order) total += y_[i];
            double left = 0.0;
            for (std::size_t p = 1; p < n; ++p) {
                left += y_[order[p - 1]];
                if (p < params_.min_leaf || n - p < params_.min_leaf) continue;
                const double a = x_(static_cast<Eigen::Index>(order[p - 1]), col);
                const double b = x_(static_cast<Eigen::Index>(order[p]), col);
                if (!(a < b)) continue;
                const double right = total - left;
                const double score = left * left / static_cast<double>(p) + right * right / static_cast<double>(n - p);
                if (score > best.score) {
                    double mid = a + (b - a) / 2.0;
                    if (!(mid < b)) mid = a;
                    best = {static_cast<int>(f), mid, score};
                }
            }
        }
        return best;
    }

    const Eigen::MatrixXd& x_;
    std::span<const double> y_;
    TreeParams params_;
    Rng* rng_;
    std::vector<std::size_t> all_features_;
    RegressionTree tree_;
};

}  // namespace

RegressionTree fit_tree(const Eigen::MatrixXd& x, std::span<const double> y, std::span<const std::size_t> sample,
                        const TreeParams& params, Rng* rng) {
    if (x.rows() == 0 || x.cols() == 0 || sample.empty()) throw DomainError("fit_tree: empty training data");
    if (y.size() != static_cast<std::size_t>(x.rows())) throw DomainError("fit_tree: target length differs from rows");
    if (params.min_leaf < 1) throw DomainError("fit_tree: min_leaf must be >= 1");
    if (params.mtry > static_cast<std::size_t>(x.cols())) throw DomainError("fit_tree: mtry exceeds column count");
    if (params.mtry != 0 && params.mtry < static_cast<std::size_t>(x.cols()) && rng == nullptr) {
        throw DomainError("fit_tree: feature sampling needs a random stream");
    }
    for (std::size_t i : sample) {
        if (i >= y.size()) throw DomainError("fit_tree: sample index out of range");
    }
    return Builder(x, y, params, rng).build({sample.begin(), sample.end()});
}

}  // namespace vaxcast::regress
