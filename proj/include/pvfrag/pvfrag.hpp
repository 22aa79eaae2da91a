#pragma once

#include "pvfrag/cache.hpp"
#include "pvfrag/duality.hpp"
#include "pvfrag/dynamics.hpp"
#include "pvfrag/krylov.hpp"
#include "pvfrag/models.hpp"
#include "pvfrag/spinchain.hpp"
