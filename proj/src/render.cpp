#include "wickgen/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace wickgen {

namespace {

char sum_letter(int k) {
    // summation letters continue after the output letters
    return static_cast<char>('a' + k);
}

struct SlotInfo {
    int factor;  // block id, -2 epsilon, -1 output
    int pos;
};

}  // namespace

std::string render_term(const Term& t) {
    auto blocks = t.monomial.all_blocks();
    std::vector<SlotInfo> slots;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int s = 0; s < blocks[b].rank; ++s) slots.push_back({static_cast<int>(b), s});
    int eps_count = t.total_slots() - t.block_slot_count() - t.out.rank;
    for (int s = 0; s < eps_count; ++s) slots.push_back({-2, s});
    for (int r = 0; r < t.out.rank; ++r) slots.push_back({-1, r});

    // letter per slot: output letters first, then summation letters in
    // canonical pair order
    std::vector<std::string> letter(slots.size());
    std::vector<bool> to_output(slots.size(), false);
    int next = t.out.rank;
    std::vector<std::pair<int, int>> metric_factors;
    for (auto [x, y] : t.pairs) {
        const SlotInfo& a = slots[static_cast<std::size_t>(x)];
        const SlotInfo& b = slots[static_cast<std::size_t>(y)];
        if (a.factor == -1 && b.factor == -1) {
            metric_factors.push_back({a.pos, b.pos});
        } else if (a.factor == -1 || b.factor == -1) {
            int out_pos = a.factor == -1 ? a.pos : b.pos;
            int other = a.factor == -1 ? y : x;
            letter[static_cast<std::size_t>(other)] = std::string(1, sum_letter(out_pos));
            to_output[static_cast<std::size_t>(other)] = true;
        } else {
            std::string l(1, sum_letter(next++));
            letter[static_cast<std::size_t>(x)] = l;
            letter[static_cast<std::size_t>(y)] = l;
        }
    }

    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) os << " ";
        os << s;
        first = false;
    };
    for (auto [p, q] : metric_factors)
        emit(std::string("g_{") + sum_letter(p) + sum_letter(q) + "}");

    int base = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const BlockDescriptor& bd = blocks[b];
        // split slots into the field/core part and the derivative part
        int field_rank = bd.rank - bd.derivs;
        if (bd.kind == BlockKind::CurvatureS) field_rank = 4;

        // count self-paired derivative slots (same block, both in the
        // derivative range): render each such pair as one Box
        std::vector<bool> boxed(static_cast<std::size_t>(bd.rank), false);
        int boxes = 0;
        if (bd.kind == BlockKind::Background) {
            for (auto [x, y] : t.pairs) {
                const SlotInfo& sa = slots[static_cast<std::size_t>(x)];
                const SlotInfo& sb = slots[static_cast<std::size_t>(y)];
                if (sa.factor == static_cast<int>(b) && sb.factor == static_cast<int>(b) &&
                    sa.pos >= field_rank && sb.pos >= field_rank) {
                    boxed[static_cast<std::size_t>(sa.pos)] = true;
                    boxed[static_cast<std::size_t>(sb.pos)] = true;
                    ++boxes;
                }
            }
        }

        std::ostringstream name;
        if (bd.kind == BlockKind::CurvatureS) {
            // dictionary for the undifferentiated curvature block
            std::string low, high;
            std::vector<std::string> idx;
            for (int s = 0; s < bd.rank; ++s) idx.push_back(letter[static_cast<std::size_t>(base + s)]);
            if (bd.derivs == 0) {
                bool g1 = idx[0] == idx[1];  // first pair self-traced
                bool g2 = idx[2] == idx[3];
                // count how many pair-traces happen inside this block
                if (g1 && g2 && idx[0] != idx[2]) {
                    emit("R");
                    base += bd.rank;
                    continue;
                }
                if (g1 || g2) {
                    int f1 = g1 ? 2 : 0, f2 = g1 ? 3 : 1;
                    std::string s1 = idx[static_cast<std::size_t>(f1)];
                    std::string s2 = idx[static_cast<std::size_t>(f2)];
                    bool out1 = to_output[static_cast<std::size_t>(base + f1)];
                    bool out2 = to_output[static_cast<std::size_t>(base + f2)];
                    name << "Ric";
                    if (out1 && out2)
                        name << "_{" << s1 << s2 << "}";
                    else
                        name << "^{" << s1 << s2 << "}";
                    emit(name.str());
                    base += bd.rank;
                    continue;
                }
            }
            for (int d = 0; d < bd.derivs; ++d) name << "Grad";
            if (bd.derivs > 0) name << " ";
            name << "S^{";
            for (const auto& l : idx) name << l;
            name << "}";
            emit(name.str());
            base += bd.rank;
            continue;
        }

        // background block
        for (int d = 0; d < boxes; ++d) name << "Box";
        for (int d = 0; d < bd.derivs - 2 * boxes; ++d) name << "Grad";
        if (bd.derivs > 0) name << " ";
        name << bd.name;
        std::string lowers, uppers;
        for (int s = 0; s < bd.rank; ++s) {
            if (boxed[static_cast<std::size_t>(s)]) continue;
            const std::string& l = letter[static_cast<std::size_t>(base + s)];
            if (to_output[static_cast<std::size_t>(base + s)])
                lowers += l;
            else
                uppers += l;
        }
        if (!lowers.empty()) name << "_{" << lowers << "}";
        if (!uppers.empty()) name << "^{" << uppers << "}";
        emit(name.str());
        base += bd.rank;
    }

    if (eps_count > 0) {
        std::ostringstream name;
        name << "eps^{";
        for (int s = 0; s < eps_count; ++s) name << letter[static_cast<std::size_t>(base + s)];
        name << "}";
        emit(name.str());
    }

    if (first) emit("1");
    return os.str();
}

}  // namespace wickgen
