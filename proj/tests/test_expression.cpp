#include <gtest/gtest.h>

#include <cmath>

#include "itosynth/errors.hpp"
#include "itosynth/expression.hpp"

using namespace itosynth;

TEST(Expression, Arithmetic) {
    EXPECT_DOUBLE_EQ(Expression::parse("(2*x+1)/x")(2.0), 2.5);
    EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0.0), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("-x^2")(3.0), -9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("0.5*x^(-1.5)")(4.0), 0.0625);
    EXPECT_DOUBLE_EQ(Expression::parse("1e-3 * x")(2.0), 2e-3);
}

TEST(Expression, Functions) {
    EXPECT_NEAR(Expression::parse("log(e)")(0.0), 1.0, 1e-15);
    EXPECT_NEAR(Expression::parse("exp(log(x))")(7.0), 7.0, 1e-12);
    EXPECT_NEAR(Expression::parse("sqrt(x) + pi")(4.0), 2.0 + M_PI, 1e-15);
    EXPECT_NEAR(Expression::parse("x*log(1/x)")(0.5), 0.5 * std::log(2.0), 1e-15);
}

TEST(Expression, KeepsText) { EXPECT_EQ(Expression::parse("2*x").text(), "2*x"); }

TEST(Expression, Errors) {
    EXPECT_THROW(Expression::parse(""), ModelError);
    EXPECT_THROW(Expression::parse("2*"), ModelError);
    EXPECT_THROW(Expression::parse("(x"), ModelError);
    EXPECT_THROW(Expression::parse("y"), ModelError);
    EXPECT_THROW(Expression::parse("sin(x)"), ModelError);
    EXPECT_THROW(Expression::parse("x x"), ModelError);
}
