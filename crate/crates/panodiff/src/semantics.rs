//! Distortion-resilient semantic conditioning.
//!
//! A segmentation map is turned into network input in three steps: positions
//! outside the visible crop are assigned a dedicated unknown class, the map
//! is split into one binary mask per class, and the mask stack is contracted
//! against a table of per-class embedding vectors. The result is a per-pixel
//! embedding in which every pixel carries the embedding column of its class,
//! so the encoding survives arbitrary panorama rotation: rotating the map and
//! encoding commute.

use crate::error::{Error, Result};
use crate::geom::{self, ErpGrid, RotationAngles, RotationMatrix};
use crate::tensor::Tensor3;

/// A grid of class ids with a designated unknown class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationMap {
    grid: ErpGrid,
    ids: Vec<u32>,
    num_classes: u32,
    unknown_id: u32,
}

impl SegmentationMap {
    /// `ids` is row-major `H x W`; every id must be `< num_classes`, as must
    /// `unknown_id`.
    pub fn new(grid: ErpGrid, ids: Vec<u32>, num_classes: u32, unknown_id: u32) -> Result<Self> {
        if ids.len() != grid.pixels() {
            return Err(Error::shape(format!(
                "segmentation ids length {} != {} pixels",
                ids.len(),
                grid.pixels()
            )));
        }
        if unknown_id >= num_classes {
            return Err(Error::invalid(format!(
                "unknown_id {unknown_id} outside {num_classes} classes"
            )));
        }
        if let Some(bad) = ids.iter().find(|&&id| id >= num_classes) {
            return Err(Error::invalid(format!("class id {bad} outside {num_classes} classes")));
        }
        Ok(SegmentationMap { grid, ids, num_classes, unknown_id })
    }

    pub fn grid(&self) -> ErpGrid {
        self.grid
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn num_classes(&self) -> u32 {
        self.num_classes
    }

    pub fn unknown_id(&self) -> u32 {
        self.unknown_id
    }

    #[inline]
    pub fn id_at(&self, i: usize, j: usize) -> u32 {
        self.ids[i * self.grid.width() + j]
    }

    /// Rotates the map like a panorama: nearest-neighbor pull-back, ids are
    /// looked up, never blended.
    pub fn rotate(&self, angles: RotationAngles) -> SegmentationMap {
        self.rotate_by_matrix(&geom::rotation_matrix(angles))
    }

    pub fn rotate_by_matrix(&self, rot: &RotationMatrix) -> SegmentationMap {
        let map = geom::rotation_index_map(self.grid, rot);
        let ids = map.iter().map(|&k| self.ids[k]).collect();
        SegmentationMap { grid: self.grid, ids, ..*self }
    }

    /// Exact circular column shift, matching [`geom::yaw_shift`].
    pub fn yaw_shift(&self, k: i64) -> SegmentationMap {
        let ids = geom::yaw_shift_plane(&self.ids, self.grid.height(), self.grid.width(), k);
        SegmentationMap { grid: self.grid, ids, ..*self }
    }
}

/// One `{0,1}` mask per class; at every pixel exactly one mask is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMaskStack {
    num_classes: u32,
    height: usize,
    width: usize,
    masks: Vec<u8>,
}

impl BinaryMaskStack {
    pub fn num_classes(&self) -> u32 {
        self.num_classes
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, class: u32, i: usize, j: usize) -> u8 {
        self.masks[(class as usize * self.height + i) * self.width + j]
    }

    /// Row-major `H x W` plane of one class.
    pub fn mask(&self, class: u32) -> &[u8] {
        let plane = self.height * self.width;
        &self.masks[class as usize * plane..(class as usize + 1) * plane]
    }

    /// True when every pixel is covered by exactly one mask.
    pub fn is_partition_of_unity(&self) -> bool {
        let plane = self.height * self.width;
        (0..plane).all(|p| {
            let total: u32 = (0..self.num_classes as usize)
                .map(|k| self.masks[k * plane + p] as u32)
                .sum();
            total == 1
        })
    }
}

/// Per-class embedding vectors: a `C_E x K` table with one column per class.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelEmbeddingTable {
    embed_dim: usize,
    num_classes: u32,
    /// Column-major by class: the vector of class `k` is contiguous.
    columns: Vec<f64>,
    /// One string per class; by convention the full prompt text.
    labels: Vec<String>,
}

impl LabelEmbeddingTable {
    pub fn new(
        embed_dim: usize,
        num_classes: u32,
        columns: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if embed_dim == 0 {
            return Err(Error::invalid("embedding dimension must be >= 1"));
        }
        if columns.len() != embed_dim * num_classes as usize {
            return Err(Error::shape(format!(
                "embedding table length {} != {embed_dim} x {num_classes}",
                columns.len()
            )));
        }
        if labels.len() != num_classes as usize {
            return Err(Error::shape(format!(
                "expected {num_classes} labels, got {}",
                labels.len()
            )));
        }
        if !columns.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("embedding table".into()));
        }
        Ok(LabelEmbeddingTable { embed_dim, num_classes, columns, labels })
    }

    pub fn embed_dim(&self) -> usize {
        self.embed_dim
    }

    pub fn num_classes(&self) -> u32 {
        self.num_classes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[f64] {
        &self.columns
    }

    /// The embedding vector of one class.
    pub fn column(&self, class: u32) -> &[f64] {
        let d = self.embed_dim;
        &self.columns[class as usize * d..(class as usize + 1) * d]
    }
}

/// The `C_E x h x w` field assigning each pixel its class embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct PerPixelEmbedding {
    data: Tensor3,
}

impl PerPixelEmbedding {
    pub fn tensor(&self) -> &Tensor3 {
        &self.data
    }

    pub fn into_tensor(self) -> Tensor3 {
        self.data
    }

    pub fn embed_dim(&self) -> usize {
        self.data.channels()
    }

    /// The embedding vector at one pixel.
    pub fn at(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.data.channels()).map(|c| self.data.get(c, i, j)).collect()
    }
}

/// Replaces class ids outside the visible region with the unknown class.
///
/// `visible` is a row-major `H x W` mask; ids where it is nonzero are kept,
/// the rest become `unknown_id`. Idempotent for a fixed mask.
pub fn fill_unknown(
    seg: &SegmentationMap,
    visible: &[u8],
    unknown_id: u32,
) -> Result<SegmentationMap> {
    if visible.len() != seg.grid().pixels() {
        return Err(Error::shape(format!(
            "visibility mask length {} != {} pixels",
            visible.len(),
            seg.grid().pixels()
        )));
    }
    if unknown_id >= seg.num_classes() {
        return Err(Error::invalid(format!(
            "unknown_id {unknown_id} outside {} classes",
            seg.num_classes()
        )));
    }
    let ids = seg
        .ids()
        .iter()
        .zip(visible)
        .map(|(&id, &vis)| if vis != 0 { id } else { unknown_id })
        .collect();
    SegmentationMap::new(seg.grid(), ids, seg.num_classes(), unknown_id)
}

/// Nearest-neighbor class-id downsampling to a smaller 2:1 grid: each target
/// pixel takes the id of the source pixel nearest to its center (ties round
/// away from zero). Ids are looked up, never interpolated.
pub fn downsample_seg(seg: &SegmentationMap, height: usize, width: usize) -> Result<SegmentationMap> {
    let target = ErpGrid::new(height, width)?;
    let src = seg.grid();
    if height > src.height() || width > src.width() {
        return Err(Error::invalid(format!(
            "downsample target {height}x{width} exceeds source {}x{}",
            src.height(),
            src.width()
        )));
    }
    let mut ids = Vec::with_capacity(target.pixels());
    for i in 0..height {
        let si = nearest_source_index(i, src.height(), height);
        for j in 0..width {
            let sj = nearest_source_index(j, src.width(), width);
            ids.push(seg.ids()[si * src.width() + sj]);
        }
    }
    SegmentationMap::new(target, ids, seg.num_classes(), seg.unknown_id())
}

fn nearest_source_index(target: usize, src_len: usize, target_len: usize) -> usize {
    let continuous = (target as f64 + 0.5) * src_len as f64 / target_len as f64 - 0.5;
    (continuous.round() as i64).clamp(0, src_len as i64 - 1) as usize
}

/// Splits a segmentation map into one binary mask per class.
pub fn masks_from_seg(seg: &SegmentationMap) -> BinaryMaskStack {
    let grid = seg.grid();
    let plane = grid.pixels();
    let k = seg.num_classes() as usize;
    let mut masks = vec![0u8; k * plane];
    for (p, &id) in seg.ids().iter().enumerate() {
        masks[id as usize * plane + p] = 1;
    }
    BinaryMaskStack { num_classes: seg.num_classes(), height: grid.height(), width: grid.width(), masks }
}

/// Contracts a mask stack against an embedding table:
/// `out[:, i, j] = sum_k table[:, k] * masks[k][i][j]`.
///
/// Because the masks partition the image this equals a per-pixel column
/// lookup, exactly.
pub fn pixel_embedding(
    masks: &BinaryMaskStack,
    table: &LabelEmbeddingTable,
) -> Result<PerPixelEmbedding> {
    if masks.num_classes() != table.num_classes() {
        return Err(Error::shape(format!(
            "mask stack has {} classes, table has {}",
            masks.num_classes(),
            table.num_classes()
        )));
    }
    let (h, w) = (masks.height(), masks.width());
    let d = table.embed_dim();
    let mut out = Tensor3::zeros(d, h, w);
    for k in 0..masks.num_classes() {
        let column = table.column(k);
        let mask = masks.mask(k);
        for (p, &m) in mask.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let (i, j) = (p / w, p % w);
            for (c, &v) in column.iter().enumerate() {
                out.add_assign_at(c, i, j, v * m as f64);
            }
        }
    }
    Ok(PerPixelEmbedding { data: out })
}

/// The fixed text prompt attached to a class label.
pub fn prompt_template(label: &str) -> Result<String> {
    if label.is_empty() {
        return Err(Error::invalid("empty label"));
    }
    Ok(format!("a photo of a {label}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg_2x4(ids: [u32; 8], num_classes: u32, unknown: u32) -> SegmentationMap {
        SegmentationMap::new(ErpGrid::new(2, 4).unwrap(), ids.to_vec(), num_classes, unknown)
            .unwrap()
    }

    #[test]
    fn fill_unknown_trivial_masks() {
        let seg = seg_2x4([0, 1, 2, 0, 1, 2, 0, 1], 4, 3);
        let all = fill_unknown(&seg, &[1; 8], 3).unwrap();
        assert_eq!(all.ids(), seg.ids());
        let none = fill_unknown(&seg, &[0; 8], 3).unwrap();
        assert!(none.ids().iter().all(|&id| id == 3));
    }

    #[test]
    fn fill_unknown_left_half_visible() {
        let seg = seg_2x4([0, 1, 2, 0, 1, 2, 0, 1], 4, 3);
        let visible = [1, 1, 0, 0, 1, 1, 0, 0];
        let out = fill_unknown(&seg, &visible, 3).unwrap();
        assert_eq!(out.ids(), &[0, 1, 3, 3, 1, 2, 3, 3]);
        // Idempotent for the same mask.
        let again = fill_unknown(&out, &visible, 3).unwrap();
        assert_eq!(again.ids(), out.ids());
    }

    #[test]
    fn fill_unknown_rejects_shape_mismatch() {
        let seg = seg_2x4([0; 8], 2, 1);
        assert!(fill_unknown(&seg, &[1; 7], 1).is_err());
    }

    #[test]
    fn downsample_identity_and_constant() {
        let seg = seg_2x4([0, 1, 2, 0, 1, 2, 0, 1], 4, 3);
        let same = downsample_seg(&seg, 2, 4).unwrap();
        assert_eq!(same.ids(), seg.ids());

        let grid = ErpGrid::new(4, 8).unwrap();
        let constant = SegmentationMap::new(grid, vec![2; 32], 4, 3).unwrap();
        let down = downsample_seg(&constant, 2, 4).unwrap();
        assert!(down.ids().iter().all(|&id| id == 2));

        assert!(downsample_seg(&seg, 4, 8).is_err());
        assert!(downsample_seg(&seg, 1, 3).is_err());
    }

    // Expected ids derived with the index-arithmetic oracle
    // round((t+0.5)*S/T - 0.5) used on rows and columns separately:
    // target rows map to source rows {1, 3}, columns to {1, 3, 5, 7}.
    #[test]
    fn downsample_checkerboard_matches_index_oracle() {
        let grid = ErpGrid::new(4, 8).unwrap();
        let ids: Vec<u32> = (0..32).map(|p| ((p / 8 + p % 8) % 2) as u32).collect();
        let seg = SegmentationMap::new(grid, ids.clone(), 2, 1).unwrap();
        let down = downsample_seg(&seg, 2, 4).unwrap();
        let expect: Vec<u32> = (0..2)
            .flat_map(|i| (0..4).map(move |j| ids[(2 * i + 1) * 8 + (2 * j + 1)]))
            .collect();
        assert_eq!(down.ids(), &expect[..]);
        assert!(down.ids().iter().all(|&id| id == 0));
    }

    #[test]
    fn masks_match_definition() {
        let grid = ErpGrid::new(1, 2).unwrap();
        let seg = SegmentationMap::new(grid, vec![0, 1], 3, 2).unwrap();
        let m = masks_from_seg(&seg);
        assert_eq!(m.mask(0), &[1, 0]);
        assert_eq!(m.mask(1), &[0, 1]);
        assert_eq!(m.mask(2), &[0, 0]);
        assert!(m.is_partition_of_unity());

        let seg = seg_2x4([0, 1, 2, 0, 2, 0, 1, 0], 3, 2);
        let m = masks_from_seg(&seg);
        assert_eq!(m.mask(0), &[1, 0, 0, 1, 0, 1, 0, 1]);
        assert_eq!(m.mask(1), &[0, 1, 0, 0, 0, 0, 1, 0]);
        assert_eq!(m.mask(2), &[0, 0, 1, 0, 1, 0, 0, 0]);
        assert!(m.is_partition_of_unity());
    }

    #[test]
    fn single_class_map_gives_full_and_empty_masks() {
        let seg = seg_2x4([1; 8], 3, 2);
        let m = masks_from_seg(&seg);
        assert_eq!(m.mask(1), &[1; 8]);
        assert_eq!(m.mask(0), &[0; 8]);
        assert_eq!(m.mask(2), &[0; 8]);
    }

    #[test]
    fn embedding_is_column_lookup() {
        // C_E = 2, K = 3, table [[1,2,3],[4,5,6]] => column k = (k+1, k+4).
        let table = LabelEmbeddingTable::new(
            2,
            3,
            vec![1.0, 4.0, 2.0, 5.0, 3.0, 6.0],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let seg = seg_2x4([0, 1, 2, 0, 2, 0, 1, 0], 3, 2);
        let e = pixel_embedding(&masks_from_seg(&seg), &table).unwrap();
        assert_eq!(e.at(0, 1), vec![2.0, 5.0]);
        assert_eq!(e.at(0, 0), vec![1.0, 4.0]);
        assert_eq!(e.at(1, 0), vec![3.0, 6.0]);
    }

    #[test]
    fn zero_table_and_identity_table() {
        let seg = seg_2x4([0, 1, 2, 0, 2, 0, 1, 0], 3, 2);
        let zero =
            LabelEmbeddingTable::new(2, 3, vec![0.0; 6], vec!["a".into(), "b".into(), "c".into()])
                .unwrap();
        let e = pixel_embedding(&masks_from_seg(&seg), &zero).unwrap();
        assert!(e.tensor().values().iter().all(|&v| v == 0.0));

        let ident = LabelEmbeddingTable::new(
            3,
            3,
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let e = pixel_embedding(&masks_from_seg(&seg), &ident).unwrap();
        for i in 0..2 {
            for j in 0..4 {
                let onehot = e.at(i, j);
                let id = seg.id_at(i, j) as usize;
                for (c, v) in onehot.iter().enumerate() {
                    assert_eq!(*v, if c == id { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn embedding_rejects_class_mismatch() {
        let seg = seg_2x4([0; 8], 2, 1);
        let table =
            LabelEmbeddingTable::new(2, 3, vec![0.0; 6], vec!["a".into(), "b".into(), "c".into()])
                .unwrap();
        assert!(pixel_embedding(&masks_from_seg(&seg), &table).is_err());
    }

    #[test]
    fn prompt_text() {
        assert_eq!(prompt_template("bed").unwrap(), "a photo of a bed");
        assert_eq!(prompt_template("wall").unwrap(), "a photo of a wall");
        assert!(prompt_template("").is_err());
    }
}
