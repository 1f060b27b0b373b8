use super::{min_max_box, ConvexPolygon, GeometryError, Point, Rect, EPS_GEOM};

/// Which workspace walls a convex part touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WallSides {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl WallSides {
    pub fn any(&self) -> bool {
        self.left || self.right || self.bottom || self.top
    }

    pub fn touching(poly: &ConvexPolygon, ws: &Rect) -> WallSides {
        let mut s = WallSides::default();
        for p in poly.vertices() {
            s.left |= (p.x - ws.min.x).abs() <= EPS_GEOM;
            s.right |= (p.x - ws.max.x).abs() <= EPS_GEOM;
            s.bottom |= (p.y - ws.min.y).abs() <= EPS_GEOM;
            s.top |= (p.y - ws.max.y).abs() <= EPS_GEOM;
        }
        s
    }

    /// The wall(s) closest to `mmo`; used when a part is declared wall-attached
    /// without actually touching the boundary.
    fn nearest(mmo: &Rect, ws: &Rect) -> WallSides {
        let gaps = [
            mmo.min.x - ws.min.x,
            ws.max.x - mmo.max.x,
            mmo.min.y - ws.min.y,
            ws.max.y - mmo.max.y,
        ];
        let best = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let hit = |g: f64| (g - best).abs() <= EPS_GEOM;
        WallSides { left: hit(gaps[0]), right: hit(gaps[1]), bottom: hit(gaps[2]), top: hit(gaps[3]) }
    }
}

/// An arbitrarily shaped obstacle, stored as connected convex parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleGroup {
    pub id: u32,
    parts: Vec<ConvexPolygon>,
    adjacency: Vec<(usize, usize)>,
    mmg: Rect,
    mmo: Vec<Rect>,
    wall_attached: Vec<bool>,
    wall_sides: Vec<WallSides>,
    wall_override: Option<Vec<bool>>,
}

impl ObstacleGroup {
    /// Builds a group and derives its boxes and wall flags against `workspace`.
    /// `wall_override` replaces the derived per-part `wall_attached` flags.
    pub fn new(
        id: u32,
        parts: Vec<ConvexPolygon>,
        adjacency: Vec<(usize, usize)>,
        workspace: &Rect,
        wall_override: Option<Vec<bool>>,
    ) -> Result<Self, GeometryError> {
        if parts.is_empty() {
            return Err(GeometryError::EmptyGroup);
        }
        let mut adj = Vec::with_capacity(adjacency.len());
        for &(i, j) in &adjacency {
            if i >= parts.len() || j >= parts.len() || i == j {
                return Err(GeometryError::BadAdjacency(i, j));
            }
            let pair = (i.min(j), i.max(j));
            if !adj.contains(&pair) {
                adj.push(pair);
            }
        }
        if let Some(flags) = &wall_override {
            if flags.len() != parts.len() {
                return Err(GeometryError::WallFlagCount { expected: parts.len(), got: flags.len() });
            }
        }
        let mut g = ObstacleGroup {
            id,
            parts,
            adjacency: adj,
            mmg: Rect::new(Point::default(), Point::default()),
            mmo: Vec::new(),
            wall_attached: Vec::new(),
            wall_sides: Vec::new(),
            wall_override,
        };
        g.refresh(workspace);
        Ok(g)
    }

    /// Single-part convenience constructor.
    pub fn single(id: u32, part: ConvexPolygon, workspace: &Rect) -> Self {
        Self::new(id, vec![part], Vec::new(), workspace, None).expect("single part group is valid")
    }

    fn refresh(&mut self, ws: &Rect) {
        self.mmo = self.parts.iter().map(min_max_box).collect();
        self.mmg = self.mmo[1..].iter().fold(self.mmo[0], |acc, r| acc.union(r));
        let touching: Vec<WallSides> = self.parts.iter().map(|p| WallSides::touching(p, ws)).collect();
        self.wall_attached = match &self.wall_override {
            Some(flags) => flags.clone(),
            None => touching.iter().map(WallSides::any).collect(),
        };
        self.wall_sides = touching
            .into_iter()
            .zip(&self.wall_attached)
            .zip(&self.mmo)
            .map(|((t, &attached), mmo)| match (attached, t.any()) {
                (false, _) => WallSides::default(),
                (true, true) => t,
                (true, false) => WallSides::nearest(mmo, ws),
            })
            .collect();
    }

    pub fn parts(&self) -> &[ConvexPolygon] {
        &self.parts
    }

    pub fn adjacency(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn mmg(&self) -> &Rect {
        &self.mmg
    }

    pub fn mmo(&self) -> &[Rect] {
        &self.mmo
    }

    pub fn wall_attached(&self) -> &[bool] {
        &self.wall_attached
    }

    pub fn wall_override(&self) -> Option<&[bool]> {
        self.wall_override.as_deref()
    }

    pub fn wall_sides(&self, part: usize) -> WallSides {
        self.wall_sides[part]
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency.contains(&(i.min(j), i.max(j)))
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().filter_map(move |&(a, b)| {
            if a == i {
                Some(b)
            } else if b == i {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Rigid translation; boxes and derived wall flags are recomputed.
    pub fn translated(&self, by: Point, workspace: &Rect) -> ObstacleGroup {
        let mut g = self.clone();
        g.parts = self.parts.iter().map(|p| p.translate(by)).collect();
        g.refresh(workspace);
        g
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.parts.iter().flat_map(|p| p.vertices().iter().copied())
    }
}
