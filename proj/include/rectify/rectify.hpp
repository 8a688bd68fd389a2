#pragma once

#include "rectify/errors.hpp"
#include "rectify/rational.hpp"
#include "rectify/poly.hpp"
#include "rectify/format.hpp"
#include "rectify/automorphism.hpp"
#include "rectify/embedding.hpp"
#include "rectify/residual.hpp"
#include "rectify/recipes.hpp"
#include "rectify/certificate_json.hpp"
#include "rectify/cli.hpp"
