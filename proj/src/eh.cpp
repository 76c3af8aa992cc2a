#include "streamsketch/eh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "streamsketch/errors.hpp"

namespace streamsketch {

ExpHistogram::ExpHistogram(double eps_prime, std::int64_t window)
    : eps_prime_(eps_prime), window_(window) {
    if (!(eps_prime > 0.0) || eps_prime > 1.0)
        throw ParameterError("eh: eps_prime must be in (0, 1]");
    if (window < 1) throw ParameterError("eh: window must be >= 1");
    k_ = static_cast<std::uint32_t>(std::ceil(1.0 / eps_prime));
}

std::size_t ExpHistogram::merge_trigger(std::size_t) const {
    // Every class keeps between ceil(k/2) and ceil(k/2)+1 buckets, so the
    // straddling bucket stays below an eps_prime fraction of the newer mass.
    return (k_ + 1) / 2 + 2;
}

void ExpHistogram::add(std::int64_t t, std::uint64_t amount) {
    if (amount == 0) throw ParameterError("eh: amount must be >= 1");
    if (saw_add_ && t < last_add_)
        throw OrderingError("eh: timestamps must be non-decreasing");
    expire(t);
    last_add_ = t;
    saw_add_ = true;
    // Unit arrivals keep bucket sizes non-increasing from oldest to newest,
    // which the error and space guarantees depend on; inserting decomposed
    // power-of-two buckets directly would break that order.
    if (classes_.empty()) classes_.resize(1);
    for (std::uint64_t i = 0; i < amount; ++i) {
        classes_[0].push_back(Rec{t, t});
        ++count_;
        ++total_;
        cascade(0);
    }
    refresh_oldest();
}

void ExpHistogram::cascade(std::size_t cls) {
    while (cls < classes_.size() && classes_[cls].size() >= merge_trigger(cls)) {
        auto& vec = classes_[cls];
        Rec merged{std::max(vec[0].newest, vec[1].newest),
                   std::min(vec[0].oldest, vec[1].oldest)};
        vec.erase(vec.begin(), vec.begin() + 2);
        if (classes_.size() <= cls + 1) classes_.resize(cls + 2);
        auto& up = classes_[cls + 1];
        // The merged bucket's arrivals postdate everything already in the
        // class, so it lands after buckets sharing its newest timestamp.
        std::size_t pos = 0;
        while (pos < up.size() && up[pos].newest <= merged.newest) ++pos;
        up.insert(up.begin() + pos, merged);
        --count_;
        ++merges_;
        ++cls;
    }
}

void ExpHistogram::expire(std::int64_t now) {
    if (count_ == 0) return;
    std::int64_t cutoff = now - window_;
    if (oldest_newest_ > cutoff) return;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        auto& vec = classes_[c];
        std::size_t n = 0;
        while (n < vec.size() && vec[n].newest <= cutoff) ++n;
        if (n > 0) {
            vec.erase(vec.begin(), vec.begin() + n);
            count_ -= n;
            dropped_ += n;
            total_ -= (std::uint64_t{1} << c) * n;
        }
    }
    refresh_oldest();
}

void ExpHistogram::refresh_oldest() {
    if (count_ == 0) return;
    bool found = false;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        if (classes_[c].empty()) continue;
        const Rec& front = classes_[c].front();
        if (!found || front.newest <= oldest_newest_) {
            oldest_cls_ = c;
            oldest_newest_ = front.newest;
            oldest_oldest_ = front.oldest;
            found = true;
        }
    }
}

double ExpHistogram::estimate(std::int64_t now) {
    expire(now);
    if (count_ == 0) return 0.0;
    std::int64_t cutoff = now - window_;
    if (oldest_oldest_ > cutoff) return static_cast<double>(total_);
    double last = static_cast<double>(std::uint64_t{1} << oldest_cls_);
    return static_cast<double>(total_) - last / 2.0;
}

double ExpHistogram::peek(std::int64_t now) const {
    if (count_ == 0) return 0.0;
    std::int64_t cutoff = now - window_;
    std::uint64_t alive_total = 0;
    bool found = false;
    std::size_t old_cls = 0;
    std::int64_t old_newest = 0;
    std::int64_t old_oldest = 0;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const auto& vec = classes_[c];
        std::size_t n = 0;
        while (n < vec.size() && vec[n].newest <= cutoff) ++n;
        if (n == vec.size()) continue;
        alive_total += (std::uint64_t{1} << c) * (vec.size() - n);
        const Rec& front = vec[n];
        if (!found || front.newest <= old_newest) {
            old_cls = c;
            old_newest = front.newest;
            old_oldest = front.oldest;
            found = true;
        }
    }
    if (!found) return 0.0;
    if (old_oldest > cutoff) return static_cast<double>(alive_total);
    double last = static_cast<double>(std::uint64_t{1} << old_cls);
    return static_cast<double>(alive_total) - last / 2.0;
}

std::vector<ExpHistogram::Bucket> ExpHistogram::buckets() const {
    std::vector<Bucket> out;
    out.reserve(count_);
    for (std::size_t c = 0; c < classes_.size(); ++c)
        for (const Rec& rec : classes_[c])
            out.push_back(Bucket{std::uint64_t{1} << c, rec.newest, rec.oldest});
    std::sort(out.begin(), out.end(), [](const Bucket& a, const Bucket& b) {
        if (a.newest != b.newest) return a.newest > b.newest;
        if (a.size != b.size) return a.size < b.size;
        return a.oldest > b.oldest;
    });
    return out;
}

ExpHistogram ExpHistogram::from_buckets(double eps_prime, std::int64_t window,
                                        const std::vector<Bucket>& recs) {
    ExpHistogram eh(eps_prime, window);
    std::int64_t max_newest = std::numeric_limits<std::int64_t>::min();
    for (const Bucket& b : recs) {
        if (b.size == 0 || (b.size & (b.size - 1)) != 0)
            throw ParameterError("eh: bucket size must be a power of two");
        if (b.oldest > b.newest)
            throw ParameterError("eh: bucket oldest timestamp after newest");
        auto cls = static_cast<std::size_t>(std::countr_zero(b.size));
        if (eh.classes_.size() <= cls) eh.classes_.resize(cls + 1);
        eh.classes_[cls].push_back(Rec{b.newest, b.oldest});
        eh.total_ += b.size;
        ++eh.count_;
        max_newest = std::max(max_newest, b.newest);
    }
    for (auto& vec : eh.classes_)
        std::sort(vec.begin(), vec.end(), [](const Rec& a, const Rec& b) {
            if (a.newest != b.newest) return a.newest < b.newest;
            return a.oldest < b.oldest;
        });
    if (eh.count_ > 0) {
        eh.last_add_ = max_newest;
        eh.saw_add_ = true;
        eh.refresh_oldest();
    }
    return eh;
}

double ExpHistogram::bucket_bound(double eps_prime, std::int64_t window) {
    auto k = std::ceil(1.0 / eps_prime);
    double half = std::ceil(k / 2.0);
    double n = static_cast<double>(window);
    return (half + 1.0) * (std::log2(2.0 * n / k + 1.0) + 1.0) + 1.0;
}

} // namespace streamsketch
