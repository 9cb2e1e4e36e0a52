#include "starfield/generator.hpp"

#include <algorithm>
#include <numeric>

#include "starfield/errors.hpp"

namespace starfield {

// ---- MultiIndex ------------------------------------------------------------

namespace {

void check_direction(int direction) {
    if (direction < 1 || direction > kMaxBaseDim) {
        throw DimensionError("base direction " + std::to_string(direction) + " outside 1.."
                             + std::to_string(kMaxBaseDim));
    }
}

} // namespace

MultiIndex MultiIndex::of(std::initializer_list<int> directions) {
    MultiIndex r;
    for (int d : directions) {
        r = r.raised(d);
    }
    return r;
}

MultiIndex MultiIndex::single(int direction) { return MultiIndex{}.raised(direction); }

int MultiIndex::count(int direction) const {
    if (direction < 1 || direction > kMaxBaseDim) {
        return 0;
    }
    return counts_[direction - 1];
}

int MultiIndex::order() const {
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

MultiIndex MultiIndex::raised(int direction) const {
    check_direction(direction);
    MultiIndex r = *this;
    if (r.counts_[direction - 1] == 255) {
        throw DomainError("derivative order overflow");
    }
    ++r.counts_[direction - 1];
    return r;
}

MultiIndex MultiIndex::lowered(int direction) const {
    check_direction(direction);
    MultiIndex r = *this;
    if (r.counts_[direction - 1] == 0) {
        throw DomainError("cannot lower an absent direction");
    }
    --r.counts_[direction - 1];
    return r;
}

bool MultiIndex::contains(const MultiIndex& other) const {
    for (int a = 0; a < kMaxBaseDim; ++a) {
        if (counts_[a] < other.counts_[a]) {
            return false;
        }
    }
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    MultiIndex r;
    for (int a = 0; a < kMaxBaseDim; ++a) {
        int c = counts_[a] + other.counts_[a];
        if (c > 255) {
            throw DomainError("derivative order overflow");
        }
        r.counts_[a] = static_cast<std::uint8_t>(c);
    }
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
    if (!contains(other)) {
        throw DomainError("multi-index difference would be negative");
    }
    MultiIndex r;
    for (int a = 0; a < kMaxBaseDim; ++a) {
        r.counts_[a] = static_cast<std::uint8_t>(counts_[a] - other.counts_[a]);
    }
    return r;
}

std::vector<int> MultiIndex::directions() const {
    std::vector<int> r;
    for (int a = 0; a < kMaxBaseDim; ++a) {
        r.insert(r.end(), counts_[a], a + 1);
    }
    return r;
}

int MultiIndex::max_direction() const {
    for (int a = kMaxBaseDim; a >= 1; --a) {
        if (counts_[a - 1] > 0) {
            return a;
        }
    }
    return 0;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
    if (auto c = order() <=> other.order(); c != 0) {
        return c;
    }
    for (int a = 0; a < kMaxBaseDim; ++a) {
        if (counts_[a] != other.counts_[a]) {
            return other.counts_[a] <=> counts_[a];
        }
    }
    return std::strong_ordering::equal;
}

Scalar multi_binomial(const MultiIndex& top, const MultiIndex& sub) {
    Scalar r = 1;
    for (int a = 1; a <= kMaxBaseDim; ++a) {
        r *= binomial(top.count(a), sub.count(a));
    }
    return r;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& top) {
    std::vector<MultiIndex> out{MultiIndex{}};
    for (int a = 1; a <= kMaxBaseDim; ++a) {
        std::vector<MultiIndex> next;
        for (const auto& m : out) {
            MultiIndex cur = m;
            next.push_back(cur);
            for (int c = 1; c <= top.count(a); ++c) {
                cur = cur.raised(a);
                next.push_back(cur);
            }
        }
        out = std::move(next);
    }
    return out;
}

// ---- keys ------------------------------------------------------------------

namespace key {

GenKey make(GenKind kind, int field, const MultiIndex& sigma) {
    if (field < 0 || field > kMaxField) {
        throw DimensionError("generator index " + std::to_string(field) + " out of range");
    }
    GenKey k = static_cast<GenKey>(kind) << 62;
    k |= static_cast<GenKey>(field) << 50;
    k |= static_cast<GenKey>(sigma.order()) << 42;
    for (int a = 1; a <= kMaxBaseDim; ++a) {
        k |= static_cast<GenKey>(255 - sigma.count(a)) << (34 - 8 * (a - 1));
    }
    return k;
}

int count(GenKey k, int direction) {
    return 255 - static_cast<int>((k >> (34 - 8 * (direction - 1))) & 0xff);
}

MultiIndex sigma(GenKey k) {
    MultiIndex m;
    for (int a = 1; a <= kMaxBaseDim; ++a) {
        for (int c = count(k, a); c > 0; --c) {
            m = m.raised(a);
        }
    }
    return m;
}

GenKey raised(GenKey k, int direction) {
    check_direction(direction);
    if (count(k, direction) == 255) {
        throw DomainError("derivative order overflow");
    }
    // Order goes up by one, the stored complement of the count goes down by one.
    return k + (GenKey{1} << 42) - (GenKey{1} << (34 - 8 * (direction - 1)));
}

} // namespace key

// ---- Generator -------------------------------------------------------------

Generator Generator::coordinate(int direction) {
    check_direction(direction);
    return Generator(key::make(GenKind::coordinate, direction, {}), {});
}

Generator Generator::even(int field, MultiIndex sigma) {
    if (field < 1) {
        throw DimensionError("field indices start at 1");
    }
    return Generator(key::make(GenKind::even, field, sigma), {});
}

Generator Generator::odd(int field, MultiIndex sigma) {
    if (field < 1) {
        throw DimensionError("field indices start at 1");
    }
    return Generator(key::make(GenKind::odd, field, sigma), {});
}

Generator Generator::exp_atom(std::vector<Scalar> lambda) {
    while (!lambda.empty() && lambda.back() == 0) {
        lambda.pop_back();
    }
    return Generator(static_cast<GenKey>(GenKind::exp_atom) << 62, std::move(lambda));
}

Generator Generator::from_key(GenKey k) {
    if (key::kind(k) == GenKind::exp_atom) {
        throw DomainError("exp atoms have no packed key");
    }
    return Generator(k, {});
}

GenKind Generator::kind() const { return key::kind(key_); }

bool operator==(const Generator& a, const Generator& b) {
    return a.key_ == b.key_ && a.lambda_ == b.lambda_;
}

bool operator<(const Generator& a, const Generator& b) {
    if (a.key_ != b.key_) {
        return a.key_ < b.key_;
    }
    return a.lambda_ < b.lambda_;
}

} // namespace starfield
