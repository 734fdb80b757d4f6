#pragma once

#include "plap/exact.hpp"
#include "plap/geometry.hpp"
#include "plap/mesh.hpp"

#include <functional>

namespace plap {

/// Point-evaluable field consumed by the radius-profile machinery. Two
/// backends: closed-form solutions (smooth, high-order quadrature pays off)
/// and piecewise-linear nodal fields.
class FieldSampler {
public:
    virtual ~FieldSampler() = default;

    virtual double value(Vec2 x) const = 0;
    virtual Vec2 gradient(Vec2 x) const = 0;

    /// True for closed-form fields with smooth derivatives.
    virtual bool analytic() const = 0;
    /// Mesh resolution for nodal fields, 0 for closed-form ones.
    virtual double resolution() const { return 0.0; }
    /// Global amplitude scale when one is known (max nodal |u|); 0 otherwise.
    virtual double amplitude_hint() const { return 0.0; }
};

class ExactField final : public FieldSampler {
public:
    explicit ExactField(ExactSolution sol, double scale = 1.0)
        : sol_(std::move(sol)), scale_(scale) {}

    double value(Vec2 x) const override { return scale_ * sol_.value(x); }
    Vec2 gradient(Vec2 x) const override { return scale_ * sol_.gradient(x); }
    bool analytic() const override { return true; }

private:
    ExactSolution sol_;
    double scale_;
};

/// Arbitrary closed-form field given by callables (manufactured test fields).
class FunctionField final : public FieldSampler {
public:
    FunctionField(std::function<double(Vec2)> value, std::function<Vec2(Vec2)> gradient)
        : value_(std::move(value)), gradient_(std::move(gradient)) {}

    double value(Vec2 x) const override { return value_(x); }
    Vec2 gradient(Vec2 x) const override { return gradient_(x); }
    bool analytic() const override { return true; }

private:
    std::function<double(Vec2)> value_;
    std::function<Vec2(Vec2)> gradient_;
};

class FemField final : public FieldSampler {
public:
    explicit FemField(ScalarField field, double scale = 1.0);

    double value(Vec2 x) const override;
    Vec2 gradient(Vec2 x) const override;
    bool analytic() const override { return false; }
    double resolution() const override { return field_.mesh->target_h(); }
    double amplitude_hint() const override { return scale_abs_ * nodal_max_; }

    const ScalarField& field() const { return field_; }

private:
    ScalarField field_;
    double scale_;
    double scale_abs_;
    double nodal_max_;
};

/// Circle sampling for any field backend (n_theta uniform angles).
CircleSample sample_circle(const FieldSampler& field, Vec2 center, double r, int n_theta);

} // namespace plap
