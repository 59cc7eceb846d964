#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace horndelta {

// The six closed, connected rule shapes with head h(x, y) and at most two
// body atoms. Shape names encode the body variable pattern: L3-xz-zy is
// h(x,y) <- b1(x,z), b2(z,y).
enum class Shape : std::uint8_t {
    L2_xy = 0,
    L2_yx = 1,
    L3_xz_zy = 2,
    L3_zx_zy = 3,
    L3_xz_yz = 4,
    L3_zx_yz = 5,
};

inline constexpr std::array<Shape, 6> kAllShapes = {
    Shape::L2_xy, Shape::L2_yx, Shape::L3_xz_zy,
    Shape::L3_zx_zy, Shape::L3_xz_yz, Shape::L3_zx_yz,
};

enum class Var : std::uint8_t { X, Y, Z };

struct AtomSig {
    Var subject;
    Var object;

    constexpr Var other(Var v) const { return subject == v ? object : subject; }
    constexpr bool subject_is(Var v) const { return subject == v; }
};

struct ShapeSig {
    std::uint8_t body_atoms;  // 1 or 2
    AtomSig b1;
    AtomSig b2;  // valid only when body_atoms == 2
};

constexpr ShapeSig shape_sig(Shape s) {
    switch (s) {
        case Shape::L2_xy:    return {1, {Var::X, Var::Y}, {}};
        case Shape::L2_yx:    return {1, {Var::Y, Var::X}, {}};
        case Shape::L3_xz_zy: return {2, {Var::X, Var::Z}, {Var::Z, Var::Y}};
        case Shape::L3_zx_zy: return {2, {Var::Z, Var::X}, {Var::Z, Var::Y}};
        case Shape::L3_xz_yz: return {2, {Var::X, Var::Z}, {Var::Y, Var::Z}};
        case Shape::L3_zx_yz: return {2, {Var::Z, Var::X}, {Var::Y, Var::Z}};
    }
    return {};
}

constexpr bool is_length3(Shape s) { return shape_sig(s).body_atoms == 2; }

constexpr std::string_view shape_name(Shape s) {
    switch (s) {
        case Shape::L2_xy:    return "L2-xy";
        case Shape::L2_yx:    return "L2-yx";
        case Shape::L3_xz_zy: return "L3-xz-zy";
        case Shape::L3_zx_zy: return "L3-zx-zy";
        case Shape::L3_xz_yz: return "L3-xz-yz";
        case Shape::L3_zx_yz: return "L3-zx-yz";
    }
    return "?";
}

constexpr std::optional<Shape> shape_from_name(std::string_view name) {
    for (Shape s : kAllShapes) {
        if (shape_name(s) == name) return s;
    }
    return std::nullopt;
}

}  // namespace horndelta
