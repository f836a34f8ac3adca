//! Dense tensors with reverse-mode differentiation.
//!
//! A [`Tensor`] is a shape plus a flat buffer. Operations record their
//! inputs, building a DAG; [`Tensor::backward`] walks the graph in reverse
//! topological order and accumulates gradients into the leaf tensors that
//! were created with `requires_grad`. Gradients keep accumulating across
//! `backward` calls until cleared with [`Tensor::zero_grad`].
//!
//! Buffers sit behind locks so a built model can serve concurrent forward
//! passes; each call allocates its own activations. Training, which mutates
//! parameters, is exclusive.

mod gradcheck;
mod norm;
mod ops;

pub use gradcheck::{finite_diff_check, GradCheckReport};
pub use norm::BatchNorm;
pub(crate) use ops::Op;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use crate::error::{Error, Result};
use crate::graph::adjacency::AdjacencyMatrix;
use crate::scalar::Scalar;

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

pub(crate) struct TensorInner<S: Scalar> {
    id: u64,
    shape: Vec<usize>,
    data: RwLock<Vec<S>>,
    grad: Mutex<Option<Vec<S>>>,
    /// Leaf marker: gradients are retained only for tensors created with
    /// `requires_grad`.
    requires_grad: bool,
    /// Whether gradients must flow through this node (true for any node
    /// with a differentiable path to a `requires_grad` leaf).
    needs_grad: bool,
    op: Option<Op<S>>,
}

/// Shared handle to a tensor node. Clones are cheap and refer to the same
/// storage.
pub struct Tensor<S: Scalar> {
    pub(crate) inner: Arc<TensorInner<S>>,
}

impl<S: Scalar> Clone for Tensor<S> {
    fn clone(&self) -> Self {
        Tensor {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<S: Scalar> std::fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tensor")
            .field("shape", &self.inner.shape)
            .field("requires_grad", &self.inner.requires_grad)
            .finish()
    }
}

pub(crate) fn numel(shape: &[usize]) -> usize {
    shape.iter().product()
}

impl<S: Scalar> Tensor<S> {
    fn new_inner(shape: Vec<usize>, data: Vec<S>, requires_grad: bool, op: Option<Op<S>>) -> Self {
        debug_assert_eq!(numel(&shape), data.len());
        debug_assert!(
            data.iter().all(|v| v.is_finite()),
            "non-finite tensor entry"
        );
        let needs_grad = requires_grad
            || op
                .as_ref()
                .map(|o| o.parents().iter().any(|p| p.inner.needs_grad))
                .unwrap_or(false);
        Tensor {
            inner: Arc::new(TensorInner {
                id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
                shape,
                data: RwLock::new(data),
                grad: Mutex::new(None),
                requires_grad,
                needs_grad,
                op,
            }),
        }
    }

    pub(crate) fn from_op(shape: Vec<usize>, data: Vec<S>, op: Op<S>) -> Self {
        Self::new_inner(shape, data, false, Some(op))
    }

    pub fn from_vec(shape: impl Into<Vec<usize>>, data: Vec<S>) -> Result<Self> {
        let shape = shape.into();
        if numel(&shape) != data.len() {
            return Err(Error::shape(
                "Tensor::from_vec",
                format!("shape {shape:?} needs {} values, got {}", numel(&shape), data.len()),
            ));
        }
        Ok(Self::new_inner(shape, data, false, None))
    }

    pub fn zeros(shape: impl Into<Vec<usize>>) -> Self {
        let shape = shape.into();
        let n = numel(&shape);
        Self::new_inner(shape, vec![S::zero(); n], false, None)
    }

    pub fn full(shape: impl Into<Vec<usize>>, value: S) -> Self {
        let shape = shape.into();
        let n = numel(&shape);
        Self::new_inner(shape, vec![value; n], false, None)
    }

    pub fn scalar(value: S) -> Self {
        Self::new_inner(vec![], vec![value], false, None)
    }

    /// Constant `[n, n]` tensor from a graph matrix.
    pub fn from_matrix(m: &AdjacencyMatrix<S>) -> Self {
        Self::new_inner(vec![m.n(), m.n()], m.values().to_vec(), false, None)
    }

    /// Marks this leaf as a gradient target. Only leaves can be marked.
    pub fn requires_grad(self) -> Self {
        assert!(
            self.inner.op.is_none(),
            "requires_grad can only be set on leaf tensors"
        );
        let data = self.inner.data.read().unwrap().clone();
        Self::new_inner(self.inner.shape.clone(), data, true, None)
    }

    pub fn is_requires_grad(&self) -> bool {
        self.inner.requires_grad
    }

    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn shape(&self) -> &[usize] {
        &self.inner.shape
    }

    pub fn ndim(&self) -> usize {
        self.inner.shape.len()
    }

    pub fn len(&self) -> usize {
        numel(&self.inner.shape)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Copy of the underlying buffer.
    pub fn data(&self) -> Vec<S> {
        self.inner.data.read().unwrap().clone()
    }

    /// Runs `f` over the buffer without copying.
    pub fn with_data<R>(&self, f: impl FnOnce(&[S]) -> R) -> R {
        f(&self.inner.data.read().unwrap())
    }

    /// Value of a scalar tensor.
    pub fn item(&self) -> S {
        assert_eq!(self.len(), 1, "item() requires a single-element tensor");
        self.inner.data.read().unwrap()[0]
    }

    /// Overwrites the buffer in place; shape is unchanged.
    pub fn set_data(&self, values: &[S]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::shape(
                "Tensor::set_data",
                format!("expected {} values, got {}", self.len(), values.len()),
            ));
        }
        self.inner.data.write().unwrap().copy_from_slice(values);
        Ok(())
    }

    /// Accumulated gradient, if any.
    pub fn grad(&self) -> Option<Vec<S>> {
        self.inner.grad.lock().unwrap().clone()
    }

    /// Gradient with missing treated as zero.
    pub fn grad_or_zeros(&self) -> Vec<S> {
        self.grad().unwrap_or_else(|| vec![S::zero(); self.len()])
    }

    pub fn zero_grad(&self) {
        *self.inner.grad.lock().unwrap() = None;
    }

    fn accumulate_leaf_grad(&self, g: &[S]) {
        let mut guard = self.inner.grad.lock().unwrap();
        match guard.as_mut() {
            Some(existing) => {
                for (e, &v) in existing.iter_mut().zip(g) {
                    *e += v;
                }
            }
            None => *guard = Some(g.to_vec()),
        }
    }

    /// Reverse-mode sweep from a scalar. Every `requires_grad` leaf that is
    /// reachable receives (accumulates) its gradient.
    pub fn backward(&self) -> Result<()> {
        if self.len() != 1 {
            return Err(Error::NonScalarLoss(self.inner.shape.clone()));
        }
        // Post-order over parent edges: a node appears after everything it
        // feeds from, so the reversed order visits each node before its
        // parents.
        let mut order: Vec<Tensor<S>> = Vec::new();
        let mut visited: HashMap<u64, ()> = HashMap::new();
        let mut stack: Vec<(Tensor<S>, usize)> = vec![(self.clone(), 0)];
        visited.insert(self.inner.id, ());
        while let Some((node, child_idx)) = stack.pop() {
            let parents = node
                .inner
                .op
                .as_ref()
                .map(|o| o.parents())
                .unwrap_or_default();
            if child_idx < parents.len() {
                stack.push((node.clone(), child_idx + 1));
                let p = parents[child_idx].clone();
                if p.inner.needs_grad && !visited.contains_key(&p.inner.id) {
                    visited.insert(p.inner.id, ());
                    stack.push((p, 0));
                }
            } else {
                order.push(node);
            }
        }

        let mut grads: HashMap<u64, Vec<S>> = HashMap::new();
        grads.insert(self.inner.id, vec![S::one()]);
        for node in order.iter().rev() {
            let Some(g) = grads.remove(&node.inner.id) else {
                continue;
            };
            if node.inner.requires_grad {
                node.accumulate_leaf_grad(&g);
            }
            if let Some(op) = &node.inner.op {
                op.backward(&g, node, &mut grads)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn accumulate_into<S: Scalar>(
    grads: &mut HashMap<u64, Vec<S>>,
    target: &Tensor<S>,
    contribution: Vec<S>,
) {
    if !target.inner.needs_grad {
        return;
    }
    match grads.entry(target.inner.id) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            for (acc, v) in e.get_mut().iter_mut().zip(contribution) {
                *acc += v;
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(contribution);
        }
    }
}

/// Named, trainable tensor.
#[derive(Clone)]
pub struct Parameter<S: Scalar> {
    tensor: Tensor<S>,
    name: String,
    weight_decay_exempt: bool,
}

impl<S: Scalar> Parameter<S> {
    pub fn new(name: impl Into<String>, tensor: Tensor<S>) -> Self {
        Parameter {
            tensor: tensor.requires_grad(),
            name: name.into(),
            weight_decay_exempt: false,
        }
    }

    /// Excluded from weight decay (normalization scales and shifts).
    pub fn exempt(mut self) -> Self {
        self.weight_decay_exempt = true;
        self
    }

    pub fn tensor(&self) -> &Tensor<S> {
        &self.tensor
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_weight_decay_exempt(&self) -> bool {
        self.weight_decay_exempt
    }

    pub fn len(&self) -> usize {
        self.tensor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensor.is_empty()
    }
}

impl<S: Scalar> std::fmt::Debug for Parameter<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Parameter")
            .field("name", &self.name)
            .field("shape", &self.tensor.shape())
            .finish()
    }
}

/// Checks that a parameter list has no duplicate registrations.
pub fn check_unique_parameters<S: Scalar>(params: &[Parameter<S>]) -> Result<()> {
    let mut seen_names = HashMap::new();
    let mut seen_ids = HashMap::new();
    for p in params {
        if seen_names.insert(p.name.clone(), ()).is_some() {
            return Err(Error::DuplicateParameter(p.name.clone()));
        }
        if seen_ids.insert(p.tensor.id(), ()).is_some() {
            return Err(Error::DuplicateParameter(p.name.clone()));
        }
    }
    Ok(())
}
