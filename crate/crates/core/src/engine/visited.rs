use crate::graph::{EdgeId, Vertex};

/// Generation-stamped marks on vertices and edges, each remembering the step
/// that set it. [`clear`](VisitedMap::clear) is O(1).
#[derive(Clone, Debug)]
pub struct VisitedMap {
    vertices: Vec<(u32, u32)>,
    edges: Vec<(u32, u32)>,
    generation: u32,
}

impl VisitedMap {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            vertices: vec![(0, 0); n],
            edges: vec![(0, 0); m],
            generation: 1,
        }
    }

    pub fn clear(&mut self) {
        if self.generation == u32::MAX {
            self.vertices.fill((0, 0));
            self.edges.fill((0, 0));
            self.generation = 1;
        } else {
            self.generation += 1;
        }
    }

    #[inline]
    pub fn mark_vertex(&mut self, v: Vertex, step: usize) {
        self.vertices[v as usize] = (self.generation, step as u32);
    }

    #[inline]
    pub fn mark_edge(&mut self, e: EdgeId, step: usize) {
        self.edges[e as usize] = (self.generation, step as u32);
    }

    #[inline]
    pub fn unmark_vertex(&mut self, v: Vertex) {
        self.vertices[v as usize].0 = 0;
    }

    #[inline]
    pub fn unmark_edge(&mut self, e: EdgeId) {
        self.edges[e as usize].0 = 0;
    }

    /// Step that marked `v`, if marked in the current generation.
    #[inline]
    pub fn vertex_step(&self, v: Vertex) -> Option<usize> {
        let (gen, step) = self.vertices[v as usize];
        (gen == self.generation).then_some(step as usize)
    }

    #[inline]
    pub fn edge_step(&self, e: EdgeId) -> Option<usize> {
        let (gen, step) = self.edges[e as usize];
        (gen == self.generation).then_some(step as usize)
    }

    pub fn marked_vertices(&self) -> usize {
        self.vertices.iter().filter(|s| s.0 == self.generation).count()
    }

    pub fn marked_edges(&self) -> usize {
        self.edges.iter().filter(|s| s.0 == self.generation).count()
    }
}
