//! Seeded synthetic corpus of e-commerce application events.
//!
//! Generation draws from three independent PCG-XSL-RR 128/64 streams, all
//! created with `Pcg64::new(seed as u128, stream)`:
//!
//! * stream 1 (categories): one draw per event. `u = (next_u64 >> 11) / 2^53`;
//!   the event takes the first category, in [`Category::ALL`] order, whose
//!   cumulative weight exceeds `u * total_weight`.
//! * stream 2 (time): one draw per event, `offset = floor(u * window_length)`
//!   seconds. Offsets are sorted ascending and assigned to events in order.
//! * stream 3 (content): event kind, service, attribute values and frames.
//!
//! Coverage: when `event_count` is at least the number of categories with a
//! positive weight, each such category that received no event takes over the
//! last slot of the currently most frequent category (earliest category on a
//! tie), processing missing categories in [`Category::ALL`] order.

use std::fmt;
use std::str::FromStr;

use rand_core::Rng;
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use super::event::{Frame, Level, LogEvent};
use super::registry::{CodeRegistry, Namespace, RegistryError};

const CATEGORY_STREAM: u128 = 1;
const TIME_STREAM: u128 = 2;
const CONTENT_STREAM: u128 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    HttpRequest,
    DbQuery,
    Auth,
    Business,
    ErrorWithTrace,
    Warning,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::HttpRequest,
        Category::DbQuery,
        Category::Auth,
        Category::Business,
        Category::ErrorWithTrace,
        Category::Warning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::HttpRequest => "http_request",
            Category::DbQuery => "db_query",
            Category::Auth => "auth",
            Category::Business => "business",
            Category::ErrorWithTrace => "error_with_trace",
            Category::Warning => "warning",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Category that produces events of `kind`, if the generator knows it.
    pub fn of_kind(kind: &str) -> Option<Category> {
        KINDS.iter().find(|k| k.name == kind).map(|k| k.category)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryWeights(pub [f64; 6]);

impl Default for CategoryWeights {
    fn default() -> Self {
        Self([0.35, 0.25, 0.10, 0.15, 0.075, 0.075])
    }
}

impl CategoryWeights {
    pub fn get(&self, c: Category) -> f64 {
        self.0[c.index()]
    }

    pub fn set(&mut self, c: Category, w: f64) {
        self.0[c.index()] = w;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub event_count: usize,
    /// Unix epoch seconds.
    pub window_start: i64,
    /// Seconds.
    pub window_length: u64,
    pub category_weights: CategoryWeights,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            event_count: 200,
            // 2025-01-15 10:00:00 UTC
            window_start: 1_736_935_200,
            window_length: 1800,
            category_weights: CategoryWeights::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("category weights are all zero")]
    ZeroWeights,
    #[error("category weight for {0} is negative or not finite")]
    BadWeight(Category),
    #[error("window length must be positive")]
    EmptyWindow,
    #[error("registry is missing a required code: {0}")]
    MissingCode(#[from] RegistryError),
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.window_length == 0 {
            return Err(GenerateError::EmptyWindow);
        }
        for c in Category::ALL {
            let w = self.category_weights.get(c);
            if !w.is_finite() || w < 0.0 {
                return Err(GenerateError::BadWeight(c));
            }
        }
        if self.category_weights.0.iter().all(|w| *w == 0.0) {
            return Err(GenerateError::ZeroWeights);
        }
        Ok(())
    }
}

fn unit(rng: &mut Pcg64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut Pcg64, n: usize) -> usize {
    ((unit(rng) * n as f64) as usize).min(n.saturating_sub(1))
}

/// Category of every event slot, before timestamps and content are drawn.
pub fn draw_categories(spec: &CorpusSpec) -> Vec<Category> {
    let mut rng = Pcg64::new(spec.seed as u128, CATEGORY_STREAM);
    let weights = &spec.category_weights;
    let total: f64 = weights.0.iter().sum();
    let last_positive = Category::ALL
        .into_iter()
        .rev()
        .find(|c| weights.get(*c) > 0.0)
        .unwrap_or(Category::HttpRequest);

    let mut slots: Vec<Category> = (0..spec.event_count)
        .map(|_| {
            let target = unit(&mut rng) * total;
            let mut cum = 0.0;
            for c in Category::ALL {
                cum += weights.get(c);
                if weights.get(c) > 0.0 && target < cum {
                    return c;
                }
            }
            last_positive
        })
        .collect();

    let positive: Vec<Category> = Category::ALL
        .into_iter()
        .filter(|c| weights.get(*c) > 0.0)
        .collect();
    if spec.event_count >= positive.len() {
        for missing in positive.iter().copied() {
            let mut counts = [0usize; 6];
            for c in &slots {
                counts[c.index()] += 1;
            }
            if counts[missing.index()] > 0 {
                continue;
            }
            let most = Category::ALL
                .into_iter()
                .max_by(|a, b| counts[a.index()].cmp(&counts[b.index()]).then(b.cmp(a)))
                .expect("six categories");
            let slot = slots.iter().rposition(|c| *c == most).expect("most frequent exists");
            slots[slot] = missing;
        }
    }
    slots
}

/// Generates the corpus described by `spec`, sorted by timestamp.
pub fn generate_corpus(spec: &CorpusSpec, registry: &CodeRegistry) -> Result<Vec<LogEvent>, GenerateError> {
    spec.validate()?;
    check_registry(registry)?;

    let categories = draw_categories(spec);

    let mut time_rng = Pcg64::new(spec.seed as u128, TIME_STREAM);
    let mut offsets: Vec<u64> = (0..spec.event_count)
        .map(|_| (unit(&mut time_rng) * spec.window_length as f64) as u64)
        .map(|o| o.min(spec.window_length - 1))
        .collect();
    offsets.sort_unstable();

    let mut rng = Pcg64::new(spec.seed as u128, CONTENT_STREAM);
    let events = categories
        .iter()
        .zip(offsets)
        .map(|(category, offset)| {
            let ts = (spec.window_start + offset as i64) * 1000;
            make_event(&mut rng, *category, ts)
        })
        .collect();
    Ok(events)
}

/// Fails when the registry lacks any service, kind, attribute key or
/// enumerated value the generator can emit.
pub fn check_registry(registry: &CodeRegistry) -> Result<(), RegistryError> {
    registry.resolve_code(Namespace::AttrKey, THREAD_ATTR)?;
    for kind in KINDS {
        registry.resolve_code(Namespace::Kind, kind.name)?;
        for svc in kind.services {
            registry.resolve_code(Namespace::Service, svc)?;
        }
        for (key, gen) in kind.attrs {
            registry.resolve_code(Namespace::AttrKey, key)?;
            if let Gen::Enum(values) = gen {
                for v in *values {
                    registry.resolve_code(Namespace::Value, v)?;
                }
            }
        }
    }
    Ok(())
}

fn make_event(rng: &mut Pcg64, category: Category, timestamp_ms: i64) -> LogEvent {
    let candidates: Vec<&KindSpec> = KINDS.iter().filter(|k| k.category == category).collect();
    let kind = candidates[below(rng, candidates.len())];
    let service = kind.services[below(rng, kind.services.len())];
    let mut table = 0;
    let mut attributes: Vec<(String, String)> = kind
        .attrs
        .iter()
        .map(|(key, gen)| (key.to_string(), gen.draw(rng, &mut table)))
        .collect();
    attributes.push((THREAD_ATTR.to_string(), Gen::Thread.draw(rng, &mut table)));
    let stack_trace = (category == Category::ErrorWithTrace).then(|| draw_trace(rng));
    LogEvent {
        timestamp_ms,
        level: kind.level,
        service: service.to_string(),
        kind: kind.name.to_string(),
        attributes,
        stack_trace,
    }
}

/// 8 to 20 frames, usually shallow: each frame past the eighth is added with
/// probability 0.25. At most 40% application frames, the rest framework.
fn draw_trace(rng: &mut Pcg64) -> Vec<Frame> {
    let mut n = 8;
    while n < 20 && unit(rng) < 0.25 {
        n += 1;
    }
    let app_max = n * 2 / 5;
    let app = 1 + below(rng, app_max);
    let framework = n - app;
    let lead = below(rng, framework.min(2) + 1);
    let mut frames = Vec::with_capacity(n);
    let frame = |rng: &mut Pcg64, pool: &[(&str, &str)]| {
        let (symbol, file) = pool[below(rng, pool.len())];
        Frame {
            symbol: symbol.to_string(),
            file: file.to_string(),
            line: 20 + below(rng, 400) as u32,
        }
    };
    for _ in 0..lead {
        frames.push(frame(rng, FRAMEWORK_FRAMES));
    }
    for _ in 0..app {
        frames.push(frame(rng, APP_FRAMES));
    }
    for _ in 0..framework - lead {
        frames.push(frame(rng, FRAMEWORK_FRAMES));
    }
    frames
}

/// Whether a frame symbol belongs to the framework pool.
pub fn is_framework_frame(symbol: &str) -> bool {
    FRAMEWORK_FRAMES.iter().any(|(s, _)| *s == symbol)
}

struct KindSpec {
    name: &'static str,
    category: Category,
    level: Level,
    services: &'static [&'static str],
    attrs: &'static [(&'static str, Gen)],
}

enum Gen {
    /// Free text drawn from a pool; `{n}` is replaced by a number in 1000..=9999.
    Pick(&'static [&'static str]),
    /// Registry-enumerated value.
    Enum(&'static [&'static str]),
    Int(u32, u32),
    Hex(usize),
    Prefixed(&'static str, u32, u32),
    Amount,
    Ip,
    Table,
    Query,
    /// Worker thread name in the style of a servlet container or scheduler.
    Thread,
}

impl Gen {
    fn draw(&self, rng: &mut Pcg64, table: &mut usize) -> String {
        match self {
            Gen::Pick(pool) => {
                let s = pool[below(rng, pool.len())];
                if s.contains("{n}") {
                    s.replace("{n}", &(1000 + below(rng, 9000)).to_string())
                } else {
                    s.to_string()
                }
            }
            Gen::Enum(pool) => pool[below(rng, pool.len())].to_string(),
            Gen::Int(lo, hi) => (*lo as usize + below(rng, (hi - lo + 1) as usize)).to_string(),
            Gen::Hex(n) => (0..*n)
                .map(|_| char::from_digit(below(rng, 16) as u32, 16).expect("hex digit"))
                .collect(),
            Gen::Prefixed(prefix, lo, hi) => {
                format!("{prefix}{}", *lo as usize + below(rng, (hi - lo + 1) as usize))
            }
            Gen::Amount => {
                let cents = 500 + below(rng, 49_500);
                format!("{}.{:02}", cents / 100, cents % 100)
            }
            Gen::Ip => format!("10.{}.{}.{}", below(rng, 256), below(rng, 256), 1 + below(rng, 254)),
            Gen::Table => {
                *table = below(rng, TABLE_QUERIES.len());
                TABLE_QUERIES[*table].0.to_string()
            }
            Gen::Query => {
                let queries = TABLE_QUERIES[*table].1;
                queries[below(rng, queries.len())].to_string()
            }
            Gen::Thread => {
                let prefix = THREAD_POOLS[below(rng, THREAD_POOLS.len())];
                format!("{prefix}{}", 1 + below(rng, 48))
            }
        }
    }
}

/// Attribute every event carries last: the emitting thread.
const THREAD_ATTR: &str = "thread";
const THREAD_POOLS: &[&str] = &[
    "http-nio-8080-exec-",
    "http-nio-8080-exec-",
    "http-nio-8080-exec-",
    "task-scheduler-",
    "kafka-listener-",
];
const METHODS: &[&str] = &["GET", "GET", "GET", "GET", "POST", "POST", "PUT", "DELETE"];
const PATHS: &[&str] = &[
    "/api/v1/orders/{n}",
    "/api/v1/orders",
    "/api/v1/products/{n}",
    "/api/v1/products?category=running-shoes&page=2",
    "/api/v1/cart",
    "/api/v1/cart/items/{n}",
    "/api/v1/checkout",
    "/api/v1/users/{n}/addresses",
    "/api/v1/search?q=wireless+headphones",
    "/api/v1/payments/{n}/status",
];
const OK_STATUS: &[&str] = &["200", "200", "200", "200", "201", "204", "304"];
const CLIENT_ERROR_STATUS: &[&str] = &["400", "401", "403", "404", "409", "422"];
const REJECT_MESSAGES: &[&str] = &[
    "missing required field shippingAddress",
    "quantity must be a positive integer",
    "unsupported currency code",
    "cart is empty",
    "request body exceeds the 64 KB limit",
    "authentication token is missing",
];
const HEALTH_ENDPOINTS: &[&str] = &["/actuator/health/liveness", "/actuator/health/readiness"];
const STATIC_PATHS: &[&str] = &[
    "/static/js/app.4f9c2b1e.js",
    "/static/css/main.81d3a0f2.css",
    "/static/img/logo.svg",
    "/favicon.ico",
];
const UPSTREAMS: &[&str] = &[
    "http://inventory-service:8080/internal/stock",
    "http://catalog-service:8080/internal/products/{n}",
    "http://user-service:8080/internal/profiles/{n}",
    "https://api.payments-gateway.example/v1/charges",
    "http://shipping-service:8080/internal/rates",
];
const SEARCH_TERMS: &[&str] = &[
    "running shoes",
    "wireless headphones",
    "usb-c charger",
    "yoga mat",
    "espresso machine",
    "winter jacket",
];
// Statements as an ORM would emit them, aliases included.
const TABLE_QUERIES: &[(&str, &[&str])] = &[
    (
        "orders",
        &[
            "select o1_0.id,o1_0.status,o1_0.total,o1_0.currency,o1_0.created_at from orders o1_0 where o1_0.user_id=? order by o1_0.created_at desc fetch first ? rows only",
            "update orders set status=?,updated_at=?,version=? where id=? and version=?",
        ],
    ),
    (
        "order_items",
        &["select i1_0.order_id,i1_0.id,i1_0.sku,i1_0.quantity,i1_0.unit_price from order_items i1_0 where i1_0.order_id=?"],
    ),
    (
        "products",
        &[
            "select p1_0.id,p1_0.name,p1_0.price,p1_0.category_id from products p1_0 where p1_0.category_id=? and p1_0.active=true fetch first ? rows only",
            "select p1_0.id,p1_0.name,p1_0.price,p1_0.stock from products p1_0 where p1_0.id in (?,?,?,?)",
        ],
    ),
    (
        "inventory",
        &["update inventory set reserved=reserved+?,updated_at=? where sku=? and warehouse=? and available>=?"],
    ),
    (
        "users",
        &["select u1_0.id,u1_0.email,u1_0.password_hash,u1_0.locked from users u1_0 where u1_0.email=?"],
    ),
    (
        "payments",
        &["insert into payments (order_id,amount,currency,status,provider_ref,created_at) values (?,?,?,?,?,?)"],
    ),
];
const POOLS: &[&str] = &["orders-pool", "payments-pool", "catalog-pool"];
const CACHE_KEYS: &[&str] = &["product:{n}", "cart:u_{n}", "price-list:eu", "session:{n}"];
const CURRENCIES: &[&str] = &["USD", "USD", "USD", "EUR", "GBP"];
const WAREHOUSES: &[&str] = &["us-east-1", "us-west-2", "eu-central-1"];
const CARRIERS: &[&str] = &["UPS", "FedEx", "DHL", "USPS"];
const COUPONS: &[&str] = &["SPRING10", "WELCOME15", "FREESHIP", "VIP20"];
const MODEL_VERSIONS: &[&str] = &["recsys-2024.11.3", "recsys-2025.01.1"];
const USER_AGENTS: &[&str] = &[
    "Mozilla/5.0 (iPhone; CPU iPhone OS 17_2 like Mac OS X) AppleWebKit/605.1.15",
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/120.0.0.0 Safari/537.36",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/17.2 Safari/605.1.15",
    "okhttp/4.12.0",
    "python-requests/2.31.0",
    "ShopApp/3.4.1 (Android 14; Pixel 8)",
];
const APP_EXCEPTIONS: &[&str] = &[
    "java.lang.NullPointerException",
    "java.lang.IllegalStateException",
    "java.lang.IllegalArgumentException",
];
const APP_MESSAGES: &[&str] = &[
    "Cannot invoke \"Cart.getItems()\" because \"cart\" is null",
    "Order {n} is already in state SHIPPED",
    "Unknown shipping zone for postal code 99950 in country US",
    "Price list for region eu is not loaded; call PriceListLoader.refresh() before checkout",
];
const DB_EXCEPTIONS: &[&str] = &[
    "java.sql.SQLTransientConnectionException",
    "org.springframework.dao.DataAccessResourceFailureException",
];
const GATEWAY_EXCEPTIONS: &[&str] = &[
    "java.net.SocketTimeoutException",
    "javax.net.ssl.SSLHandshakeException",
    "org.springframework.web.client.HttpServerErrorException",
];
const GATEWAY_MESSAGES: &[&str] = &[
    "I/O error on POST request for \"https://api.payments-gateway.example/v1/charges\": Read timed out",
    "Remote host terminated the handshake during TLS negotiation with api.payments-gateway.example:443",
    "503 Service Unavailable: \"{\"error\":\"upstream_unavailable\",\"retry_after\":30}\"",
];
const SERIALIZATION_EXCEPTIONS: &[&str] = &[
    "com.fasterxml.jackson.databind.JsonMappingException",
    "com.fasterxml.jackson.core.JsonGenerationException",
];
const SERIALIZATION_MESSAGES: &[&str] = &[
    "Infinite recursion (StackOverflowError) through reference chain Order[\"items\"]",
    "No serializer found for class LazyInitializer",
];
const TIMEOUT_EXCEPTIONS: &[&str] = &[
    "java.util.concurrent.TimeoutException",
    "java.net.SocketTimeoutException",
];

const APP_FRAMES: &[(&str, &str)] = &[
    ("OrderController.createOrder", "OrderController.java"),
    ("OrderService.placeOrder", "OrderService.java"),
    ("PaymentService.charge", "PaymentService.java"),
    ("GatewayClient.post", "GatewayClient.java"),
    ("StockRepository.reserve", "StockRepository.java"),
    ("CartService.checkout", "CartService.java"),
    ("JsonResponseWriter.write", "JsonResponseWriter.java"),
];
const FRAMEWORK_FRAMES: &[(&str, &str)] = &[
    ("DispatcherServlet.doDispatch", "DispatcherServlet.java"),
    ("FrameworkServlet.processRequest", "FrameworkServlet.java"),
    ("InvocableHandlerMethod.invokeForRequest", "InvocableHandlerMethod.java"),
    ("CglibAopProxy$DynamicAdvisedInterceptor.intercept", "CglibAopProxy.java"),
    ("TransactionInterceptor.invoke", "TransactionInterceptor.java"),
    ("ReflectiveMethodInvocation.proceed", "ReflectiveMethodInvocation.java"),
    ("ApplicationFilterChain.doFilter", "ApplicationFilterChain.java"),
    ("StandardWrapperValve.invoke", "StandardWrapperValve.java"),
    ("CoyoteAdapter.service", "CoyoteAdapter.java"),
    ("Http11Processor.service", "Http11Processor.java"),
    ("DirectMethodHandleAccessor.invoke", "DirectMethodHandleAccessor.java"),
    ("HikariPool.getConnection", "HikariPool.java"),
    ("SqlExceptionHelper.convert", "SqlExceptionHelper.java"),
    ("ThreadPoolExecutor.runWorker", "ThreadPoolExecutor.java"),
];

const EDGE: &[&str] = &["api-gateway"];
const ORDER_SIDE: &[&str] = &["order-service", "cart-service", "api-gateway"];

const KINDS: &[KindSpec] = &[
    // http_request
    KindSpec {
        name: "http_request_completed",
        category: Category::HttpRequest,
        level: Level::Info,
        services: EDGE,
        attrs: &[
            ("method", Gen::Pick(METHODS)),
            ("path", Gen::Pick(PATHS)),
            ("status", Gen::Pick(OK_STATUS)),
            ("latency_ms", Gen::Int(3, 480)),
            ("request_id", Gen::Hex(16)),
            ("client_ip", Gen::Ip),
            ("user_agent", Gen::Pick(USER_AGENTS)),
        ],
    },
    KindSpec {
        name: "http_request_rejected",
        category: Category::HttpRequest,
        level: Level::Info,
        services: EDGE,
        attrs: &[
            ("method", Gen::Pick(METHODS)),
            ("path", Gen::Pick(PATHS)),
            ("status", Gen::Pick(CLIENT_ERROR_STATUS)),
            ("message", Gen::Pick(REJECT_MESSAGES)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "health_check_passed",
        category: Category::HttpRequest,
        level: Level::Debug,
        services: &["api-gateway", "order-service", "payment-service", "inventory-service"],
        attrs: &[("endpoint", Gen::Pick(HEALTH_ENDPOINTS)), ("latency_ms", Gen::Int(1, 12))],
    },
    KindSpec {
        name: "static_asset_served",
        category: Category::HttpRequest,
        level: Level::Debug,
        services: EDGE,
        attrs: &[
            ("path", Gen::Pick(STATIC_PATHS)),
            ("bytes", Gen::Int(512, 480_000)),
            ("latency_ms", Gen::Int(1, 40)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "upstream_call_completed",
        category: Category::HttpRequest,
        level: Level::Info,
        services: &["order-service", "cart-service", "payment-service", "shipping-service"],
        attrs: &[
            ("endpoint", Gen::Pick(UPSTREAMS)),
            ("status", Gen::Pick(OK_STATUS)),
            ("latency_ms", Gen::Int(4, 650)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "search_executed",
        category: Category::HttpRequest,
        level: Level::Info,
        services: &["search-service"],
        attrs: &[
            ("search_terms", Gen::Pick(SEARCH_TERMS)),
            ("results", Gen::Int(0, 240)),
            ("latency_ms", Gen::Int(8, 300)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    // db_query
    KindSpec {
        name: "query_executed",
        category: Category::DbQuery,
        level: Level::Debug,
        services: &["order-service", "catalog-service", "inventory-service", "user-service"],
        attrs: &[
            ("table", Gen::Table),
            ("rows", Gen::Int(0, 50)),
            ("duration_ms", Gen::Int(1, 90)),
            ("query", Gen::Query),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "transaction_committed",
        category: Category::DbQuery,
        level: Level::Debug,
        services: &["order-service", "payment-service", "inventory-service"],
        attrs: &[
            ("table", Gen::Table),
            ("rows", Gen::Int(1, 12)),
            ("duration_ms", Gen::Int(2, 60)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "transaction_rolled_back",
        category: Category::DbQuery,
        level: Level::Info,
        services: &["order-service", "payment-service", "inventory-service"],
        attrs: &[
            ("table", Gen::Table),
            ("reason", Gen::Enum(&["constraint violation", "deadlock detected"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "connection_acquired",
        category: Category::DbQuery,
        level: Level::Debug,
        services: &["order-service", "payment-service", "catalog-service"],
        attrs: &[
            ("pool", Gen::Pick(POOLS)),
            ("replica", Gen::Enum(&["primary replica", "read replica"])),
            ("duration_ms", Gen::Int(0, 25)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "cache_lookup",
        category: Category::DbQuery,
        level: Level::Debug,
        services: &["catalog-service", "cart-service", "user-service"],
        attrs: &[
            ("cache_key", Gen::Pick(CACHE_KEYS)),
            ("result", Gen::Enum(&["cache hit", "cache hit", "cache miss"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    // auth
    KindSpec {
        name: "login_succeeded",
        category: Category::Auth,
        level: Level::Info,
        services: &["auth-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("client_ip", Gen::Ip),
            ("user_agent", Gen::Pick(USER_AGENTS)),
            ("session_id", Gen::Hex(12)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "login_failed",
        category: Category::Auth,
        level: Level::Warn,
        services: &["auth-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("client_ip", Gen::Ip),
            (
                "reason",
                Gen::Enum(&["invalid credentials", "account locked", "mfa required"]),
            ),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "token_refreshed",
        category: Category::Auth,
        level: Level::Debug,
        services: &["auth-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("session_id", Gen::Hex(12)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "session_expired",
        category: Category::Auth,
        level: Level::Info,
        services: &["auth-service"],
        attrs: &[
            ("session_id", Gen::Hex(12)),
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("reason", Gen::Enum(&["token expired", "idle timeout"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "mfa_challenge_sent",
        category: Category::Auth,
        level: Level::Info,
        services: &["auth-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("channel", Gen::Enum(&["text message", "authenticator app"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "password_reset_requested",
        category: Category::Auth,
        level: Level::Info,
        services: &["auth-service", "user-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("client_ip", Gen::Ip),
            ("request_id", Gen::Hex(16)),
        ],
    },
    // business
    KindSpec {
        name: "order_created",
        category: Category::Business,
        level: Level::Info,
        services: &["order-service"],
        attrs: &[
            ("order_id", Gen::Int(1000, 9999)),
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("amount", Gen::Amount),
            ("currency", Gen::Pick(CURRENCIES)),
            ("quantity", Gen::Int(1, 6)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "order_cancelled",
        category: Category::Business,
        level: Level::Info,
        services: &["order-service"],
        attrs: &[
            ("order_id", Gen::Int(1000, 9999)),
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("reason", Gen::Enum(&["customer request", "reservation timeout"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "payment_authorized",
        category: Category::Business,
        level: Level::Info,
        services: &["payment-service"],
        attrs: &[
            ("order_id", Gen::Int(1000, 9999)),
            ("amount", Gen::Amount),
            ("currency", Gen::Pick(CURRENCIES)),
            (
                "payment_method",
                Gen::Enum(&["credit card", "paypal wallet", "gift card"]),
            ),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "payment_failed",
        category: Category::Business,
        level: Level::Error,
        services: &["payment-service"],
        attrs: &[
            ("order_id", Gen::Int(1000, 9999)),
            (
                "reason",
                Gen::Enum(&[
                    "insufficient funds",
                    "card declined",
                    "expired card",
                    "fraud suspected",
                ]),
            ),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "inventory_reserved",
        category: Category::Business,
        level: Level::Info,
        services: &["inventory-service"],
        attrs: &[
            ("quantity", Gen::Int(1, 6)),
            ("sku", Gen::Prefixed("SKU-", 10_000, 99_999)),
            ("warehouse", Gen::Pick(WAREHOUSES)),
            ("order_id", Gen::Int(1000, 9999)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "inventory_released",
        category: Category::Business,
        level: Level::Info,
        services: &["inventory-service"],
        attrs: &[
            ("quantity", Gen::Int(1, 6)),
            ("sku", Gen::Prefixed("SKU-", 10_000, 99_999)),
            ("warehouse", Gen::Pick(WAREHOUSES)),
            ("reason", Gen::Enum(&["order cancelled", "reservation timeout"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "shipment_scheduled",
        category: Category::Business,
        level: Level::Info,
        services: &["shipping-service"],
        attrs: &[
            ("delivery", Gen::Enum(&["express delivery", "standard delivery"])),
            ("order_id", Gen::Int(1000, 9999)),
            ("carrier", Gen::Pick(CARRIERS)),
            ("tracking_id", Gen::Prefixed("1Z999AA1", 10_000_000, 99_999_999)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "cart_updated",
        category: Category::Business,
        level: Level::Debug,
        services: &["cart-service"],
        attrs: &[
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("sku", Gen::Prefixed("SKU-", 10_000, 99_999)),
            ("quantity", Gen::Int(0, 6)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "coupon_applied",
        category: Category::Business,
        level: Level::Info,
        services: ORDER_SIDE,
        attrs: &[
            ("coupon", Gen::Pick(COUPONS)),
            ("order_id", Gen::Int(1000, 9999)),
            ("amount", Gen::Amount),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "refund_issued",
        category: Category::Business,
        level: Level::Info,
        services: &["payment-service"],
        attrs: &[
            ("amount", Gen::Amount),
            ("currency", Gen::Pick(CURRENCIES)),
            ("order_id", Gen::Int(1000, 9999)),
            ("reason", Gen::Enum(&["customer request", "damaged item"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "email_sent",
        category: Category::Business,
        level: Level::Info,
        services: &["notification-service"],
        attrs: &[
            (
                "template",
                Gen::Enum(&["order confirmation", "password reset", "shipping notice"]),
            ),
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "recommendations_served",
        category: Category::Business,
        level: Level::Debug,
        services: &["recommendation-service"],
        attrs: &[
            ("results", Gen::Int(4, 24)),
            ("user_id", Gen::Prefixed("u_", 10_000, 99_999)),
            ("model_version", Gen::Pick(MODEL_VERSIONS)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    // error_with_trace
    KindSpec {
        name: "unhandled_exception",
        category: Category::ErrorWithTrace,
        level: Level::Error,
        services: &["order-service", "cart-service", "catalog-service"],
        attrs: &[
            ("exception", Gen::Pick(APP_EXCEPTIONS)),
            ("path", Gen::Pick(PATHS)),
            ("message", Gen::Pick(APP_MESSAGES)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "db_connection_failed",
        category: Category::ErrorWithTrace,
        level: Level::Error,
        services: &["order-service", "payment-service", "inventory-service"],
        attrs: &[
            ("pool", Gen::Pick(POOLS)),
            ("exception", Gen::Pick(DB_EXCEPTIONS)),
            ("reason", Gen::Enum(&["connection reset by peer", "pool exhausted"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "payment_gateway_error",
        category: Category::ErrorWithTrace,
        level: Level::Error,
        services: &["payment-service"],
        attrs: &[
            ("endpoint", Gen::Pick(&["https://api.payments-gateway.example/v1/charges"])),
            ("order_id", Gen::Int(1000, 9999)),
            ("exception", Gen::Pick(GATEWAY_EXCEPTIONS)),
            ("message", Gen::Pick(GATEWAY_MESSAGES)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "serialization_error",
        category: Category::ErrorWithTrace,
        level: Level::Error,
        services: &["order-service", "catalog-service"],
        attrs: &[
            ("path", Gen::Pick(PATHS)),
            ("exception", Gen::Pick(SERIALIZATION_EXCEPTIONS)),
            ("message", Gen::Pick(SERIALIZATION_MESSAGES)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "request_timeout",
        category: Category::ErrorWithTrace,
        level: Level::Error,
        services: &["order-service", "shipping-service", "api-gateway"],
        attrs: &[
            ("endpoint", Gen::Pick(UPSTREAMS)),
            ("latency_ms", Gen::Int(3000, 30_000)),
            ("exception", Gen::Pick(TIMEOUT_EXCEPTIONS)),
            ("reason", Gen::Enum(&["upstream timeout"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    // warning
    KindSpec {
        name: "slow_query",
        category: Category::Warning,
        level: Level::Warn,
        services: &["order-service", "catalog-service", "inventory-service"],
        attrs: &[
            ("table", Gen::Table),
            ("duration_ms", Gen::Int(520, 4200)),
            ("threshold_ms", Gen::Pick(&["500"])),
            ("query", Gen::Query),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "high_latency",
        category: Category::Warning,
        level: Level::Warn,
        services: &["api-gateway", "search-service"],
        attrs: &[
            ("endpoint", Gen::Pick(PATHS)),
            ("latency_ms", Gen::Int(1100, 5000)),
            ("threshold_ms", Gen::Pick(&["1000"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "retry_scheduled",
        category: Category::Warning,
        level: Level::Warn,
        services: &["order-service", "payment-service", "shipping-service"],
        attrs: &[
            ("endpoint", Gen::Pick(UPSTREAMS)),
            ("attempt", Gen::Int(2, 4)),
            ("reason", Gen::Enum(&["upstream timeout", "connection reset by peer"])),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "inventory_low",
        category: Category::Warning,
        level: Level::Warn,
        services: &["inventory-service"],
        attrs: &[
            ("sku", Gen::Prefixed("SKU-", 10_000, 99_999)),
            ("warehouse", Gen::Pick(WAREHOUSES)),
            ("remaining", Gen::Int(0, 9)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "rate_limit_approaching",
        category: Category::Warning,
        level: Level::Warn,
        services: EDGE,
        attrs: &[
            ("client_ip", Gen::Ip),
            ("endpoint", Gen::Pick(PATHS)),
            ("remaining", Gen::Int(1, 25)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "deprecated_api_used",
        category: Category::Warning,
        level: Level::Warn,
        services: EDGE,
        attrs: &[
            ("endpoint", Gen::Pick(&["/api/v0/orders", "/api/v0/cart/items"])),
            ("user_agent", Gen::Pick(USER_AGENTS)),
            ("request_id", Gen::Hex(16)),
        ],
    },
    KindSpec {
        name: "circuit_breaker_opened",
        category: Category::Warning,
        level: Level::Warn,
        services: &["order-service", "payment-service"],
        attrs: &[("endpoint", Gen::Pick(UPSTREAMS)), ("attempt", Gen::Int(5, 10))],
    },
];
